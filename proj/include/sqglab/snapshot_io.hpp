#pragma once

// Field snapshot file: magic "SQGF", u32 grid size n (little-endian),
// f64 time, then n*n row-major f64 values, little-endian.

#include <string>

#include "sqglab/spectral_core.hpp"

namespace sqg {

struct Snapshot {
    RealField field;
    double time = 0.0;
};

void write_snapshot(const std::string& path, const RealField& field, double time);
Snapshot read_snapshot(const std::string& path);

}  // namespace sqg
