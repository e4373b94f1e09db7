#include "io/file.h"
#include <sys/socket.h>

namespace io {
namespace net {

enum Status { kClosed, kOpen };

class Socket : protected File, public ext::Pollable {
public:
    Status poll(int timeout_ms) {
        return timeout_ms > 0 ? kOpen : kClosed;
    }
};

}
}
