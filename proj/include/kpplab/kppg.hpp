#pragma once

#include <string>

#include "kpplab/grid.hpp"

namespace kpplab {

// "KPPG" snapshot container, little-endian:
//   magic "KPPG", u32 version=1, u32 payload (1 = f64 field, 2 = bitmask),
//   u32 N, u64 dims xN, f64 spacing xN, f64 origin xN, f64 time,
//   then the row-major payload (f64 per cell, or packed bits LSB-first).
void kppg_write_field(const std::string& path, const GridField& field);
GridField kppg_read_field(const std::string& path);

void kppg_write_mask(const std::string& path, const GridMask& mask);
GridMask kppg_read_mask(const std::string& path);

// payload code of a stored file (1 or 2) without loading the body
uint32_t kppg_peek_payload(const std::string& path);

}  // namespace kpplab
