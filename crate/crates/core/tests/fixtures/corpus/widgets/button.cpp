#include "widgets/button.h"

#define CLICK_LIMIT 3

namespace widgets {

void Button::press() {
    int clicks = 0;
    while (clicks < CLICK_LIMIT) {
        ++clicks;
        if (!enabled) {
            break;
        }
    }
}

}
