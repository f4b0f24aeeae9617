#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skewlab/slice.hpp"

#include "json.hpp"

namespace skewlab {

// Binary PGM (P5, 8-bit, row-major from the top row) with one comment line
// carrying the grid metadata.
void write_pgm(const std::string& path, const GridSpec& grid,
               const std::vector<uint8_t>& data, const std::string& comment);

// Little-endian float32 raw raster (row-major from the top row), described by
// a JSON sidecar written separately.
void write_raw_f32(const std::string& path, const std::vector<float>& data);

void write_text(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// one fixed shortest-round-trip text form for doubles (deterministic output)
std::string fmt_double(double v);

nlohmann::ordered_json grid_to_json(const GridSpec& g);
std::string grid_comment(const GridSpec& g, cplx z, int n_max);

}  // namespace skewlab
