#pragma once

// Internal binary container helpers shared by the dataset and model files.
// Layout: magic(8) | version u32 | payload size u64 | payload | fnv1a u64.

#include <Eigen/Dense>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbgsf::detail {

inline uint64_t fnv1a(const char* data, size_t n) {
    uint64_t h = 0xCBF29CE484222325ULL;
    for (size_t i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 0x100000001B3ULL;
    }
    return h;
}

struct Writer {
    std::vector<char> buf;

    template <typename T>
    void pod(T v) {
        const char* p = reinterpret_cast<const char*>(&v);
        buf.insert(buf.end(), p, p + sizeof(T));
    }
    void raw(const double* data, long n) {
        pod<uint64_t>(n);
        const char* p = reinterpret_cast<const char*>(data);
        buf.insert(buf.end(), p, p + sizeof(double) * n);
    }
    void vec(const Eigen::VectorXd& v) { raw(v.data(), v.size()); }
    void mat(const Eigen::MatrixXd& m) {
        pod<uint64_t>(m.rows());
        pod<uint64_t>(m.cols());
        const char* p = reinterpret_cast<const char*>(m.data());
        buf.insert(buf.end(), p, p + sizeof(double) * m.size());
    }
};

struct Reader {
    const char* p;
    const char* end;

    template <typename T>
    T pod() {
        if (p + sizeof(T) > end) throw std::runtime_error("file truncated");
        T v;
        std::memcpy(&v, p, sizeof(T));
        p += sizeof(T);
        return v;
    }
    Eigen::VectorXd vec() {
        const uint64_t n = pod<uint64_t>();
        if (p + sizeof(double) * n > end) throw std::runtime_error("file truncated");
        Eigen::VectorXd v(n);
        std::memcpy(v.data(), p, sizeof(double) * n);
        p += sizeof(double) * n;
        return v;
    }
    Eigen::MatrixXd mat() {
        const uint64_t rows = pod<uint64_t>();
        const uint64_t cols = pod<uint64_t>();
        if (p + sizeof(double) * rows * cols > end)
            throw std::runtime_error("file truncated");
        Eigen::MatrixXd m(rows, cols);
        std::memcpy(m.data(), p, sizeof(double) * rows * cols);
        p += sizeof(double) * rows * cols;
        return m;
    }
};

inline void write_container(const std::string& path, const char magic[8],
                            uint32_t version, const std::vector<char>& payload) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(magic, 8);
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    const uint64_t size = payload.size();
    out.write(reinterpret_cast<const char*>(&size), sizeof(size));
    out.write(payload.data(), payload.size());
    const uint64_t checksum = fnv1a(payload.data(), payload.size());
    out.write(reinterpret_cast<const char*>(&checksum), sizeof(checksum));
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<char> read_container(const std::string& path,
                                        const char magic[8], uint32_t version) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<char> raw((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
    const size_t header = 8 + sizeof(uint32_t) + sizeof(uint64_t);
    if (raw.size() < header + sizeof(uint64_t))
        throw std::runtime_error("corrupt file (too short): " + path);
    if (std::memcmp(raw.data(), magic, 8) != 0)
        throw std::runtime_error("bad magic: " + path);
    uint32_t file_version;
    std::memcpy(&file_version, raw.data() + 8, sizeof(file_version));
    if (file_version != version)
        throw std::runtime_error("unsupported version " +
                                 std::to_string(file_version) + ": " + path);
    uint64_t size;
    std::memcpy(&size, raw.data() + 8 + sizeof(uint32_t), sizeof(size));
    if (raw.size() != header + size + sizeof(uint64_t))
        throw std::runtime_error("corrupt file (size mismatch): " + path);
    uint64_t checksum;
    std::memcpy(&checksum, raw.data() + header + size, sizeof(checksum));
    if (checksum != fnv1a(raw.data() + header, size))
        throw std::runtime_error("checksum failure: " + path);
    return {raw.begin() + header, raw.begin() + header + size};
}

}  // namespace fbgsf::detail
