#include "skewlab/raster_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace skewlab {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_pgm(const std::string& path, const GridSpec& grid,
               const std::vector<uint8_t>& data, const std::string& comment) {
    if (data.size() != grid.npix()) throw std::invalid_argument("raster size mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "P5\n# " << comment << "\n" << grid.width << " " << grid.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(data.data()),
              std::streamsize(data.size()));
}

void write_raw_f32(const std::string& path, const std::vector<float>& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    // files are little-endian by contract; this writer assumes a LE host
    out.write(reinterpret_cast<const char*>(data.data()),
              std::streamsize(data.size() * sizeof(float)));
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out.write(content.data(), std::streamsize(content.size()));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

nlohmann::ordered_json grid_to_json(const GridSpec& g) {
    return {{"xmin", g.xmin}, {"xmax", g.xmax}, {"ymin", g.ymin},
            {"ymax", g.ymax}, {"width", g.width}, {"height", g.height}};
}

std::string grid_comment(const GridSpec& g, cplx z, int n_max) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "skewlab slice z=(%.17g,%.17g) rect=[%.17g,%.17g]x[%.17g,%.17g] "
                  "res=%dx%d nmax=%d",
                  z.real(), z.imag(), g.xmin, g.xmax, g.ymin, g.ymax, g.width,
                  g.height, n_max);
    return buf;
}

}  // namespace skewlab
