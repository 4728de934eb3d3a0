#include "kpplab/kppg.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace kpplab {

static_assert(std::endian::native == std::endian::little,
              "KPPG I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'K', 'P', 'P', 'G'};

template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("KPPG: truncated file");
    return v;
}

void write_header(std::ofstream& out, uint32_t payload, const GridSpec& g, double time) {
    out.write(kMagic, 4);
    put<uint32_t>(out, 1);  // version
    put<uint32_t>(out, payload);
    put<uint32_t>(out, static_cast<uint32_t>(g.dim));
    for (int a = 0; a < g.dim; ++a) put<uint64_t>(out, static_cast<uint64_t>(g.dims[a]));
    for (int a = 0; a < g.dim; ++a) put<double>(out, g.h[a]);
    for (int a = 0; a < g.dim; ++a) put<double>(out, g.origin[a]);
    put<double>(out, time);
}

GridSpec read_header(std::ifstream& in, uint32_t& payload, double& time) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("KPPG: bad magic");
    uint32_t version = get<uint32_t>(in);
    if (version != 1) throw std::runtime_error("KPPG: unsupported version");
    payload = get<uint32_t>(in);
    uint32_t n = get<uint32_t>(in);
    if (n < 1 || n > kMaxDim) throw std::runtime_error("KPPG: bad dimension");
    GridSpec g;
    g.dim = static_cast<int>(n);
    for (int a = 0; a < g.dim; ++a) g.dims[a] = static_cast<int>(get<uint64_t>(in));
    for (int a = 0; a < g.dim; ++a) g.h[a] = get<double>(in);
    for (int a = 0; a < g.dim; ++a) g.origin[a] = get<double>(in);
    time = get<double>(in);
    return g;
}

}  // namespace

void kppg_write_field(const std::string& path, const GridField& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("KPPG: cannot open " + path);
    write_header(out, 1, field.spec, field.time);
    out.write(reinterpret_cast<const char*>(field.values.data()),
              static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("KPPG: write failed for " + path);
}

GridField kppg_read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("KPPG: cannot open " + path);
    uint32_t payload;
    double time;
    GridSpec g = read_header(in, payload, time);
    if (payload != 1) throw std::runtime_error("KPPG: expected field payload (1)");
    GridField f(g, time);
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!in) throw std::runtime_error("KPPG: truncated payload");
    return f;
}

void kppg_write_mask(const std::string& path, const GridMask& mask) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("KPPG: cannot open " + path);
    write_header(out, 2, mask.spec, 0.0);
    const size_t n = mask.bits.size();
    std::vector<uint8_t> packed((n + 7) / 8, 0);
    for (size_t i = 0; i < n; ++i)
        if (mask.get(i)) packed[i >> 3] |= static_cast<uint8_t>(1u << (i & 7));
    out.write(reinterpret_cast<const char*>(packed.data()),
              static_cast<std::streamsize>(packed.size()));
    if (!out) throw std::runtime_error("KPPG: write failed for " + path);
}

GridMask kppg_read_mask(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("KPPG: cannot open " + path);
    uint32_t payload;
    double time;
    GridSpec g = read_header(in, payload, time);
    if (payload != 2) throw std::runtime_error("KPPG: expected bitmask payload (2)");
    GridMask m(g);
    const size_t n = m.bits.size();
    std::vector<uint8_t> packed((n + 7) / 8, 0);
    in.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(packed.size()));
    if (!in) throw std::runtime_error("KPPG: truncated payload");
    for (size_t i = 0; i < n; ++i) m.set(i, (packed[i >> 3] >> (i & 7)) & 1u);
    return m;
}

uint32_t kppg_peek_payload(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("KPPG: cannot open " + path);
    uint32_t payload;
    double time;
    read_header(in, payload, time);
    return payload;
}

}  // namespace kpplab
