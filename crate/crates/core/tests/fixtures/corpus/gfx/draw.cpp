#include "gfx/color.h"
#include "gfx/shader.h"

namespace gfx {

int luminance(const Color& c) {
    int value = (c.red * 3 + c.green * 6 + c.blue) / 10;
    if (value > 255) {
        value = 255;
    }
    return value;
}

}
