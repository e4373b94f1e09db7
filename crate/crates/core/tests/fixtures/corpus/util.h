// Shared helpers.
#ifndef UTIL_H
#define UTIL_H

#pragma once

#define MAX_SIZE 64
#define MIN(a, b) ((a) < (b) ? (a) : (b))

namespace util {

class Buffer {
public:
    explicit Buffer(int capacity);
    int clamp(int value) const;

    class Cursor {
    public:
        int position;
    };

private:
    int capacity_;
};

}

#endif
