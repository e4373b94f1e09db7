/* Legacy translation unit. */
#include "legacy/old.hxx"

int legacy_mode = 0;

int legacy_check(int flags) {
    /* decision keywords in a comment: if while for -- not counted */
    const char* text = "if (fake) { while }";
    if (flags & 0x1) {
        legacy_mode = LEGACY_DEFAULT;
    }
    return legacy_mode;
}
