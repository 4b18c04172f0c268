#include "higemine/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <map>

#include "higemine/errors.hpp"

namespace higemine::checkpoint {

namespace {

constexpr char kMagic[8] = {'H', 'G', 'M', 'C', 'K', 'P', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(buf), 4);
}

void write_u64(std::ostream& os, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(buf), 8);
}

void write_string(std::ostream& os, const std::string& s) {
    write_u32(os, static_cast<std::uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void write_doubles(std::ostream& os, const std::vector<double>& v) {
    for (double x : v) {
        std::uint64_t bits;
        std::memcpy(&bits, &x, 8);
        write_u64(os, bits);
    }
}

std::uint32_t read_u32(std::istream& is) {
    unsigned char buf[4];
    is.read(reinterpret_cast<char*>(buf), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
    return v;
}

std::uint64_t read_u64(std::istream& is) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

std::string read_string(std::istream& is) {
    const std::uint32_t len = read_u32(is);
    std::string s(len, '\0');
    is.read(s.data(), len);
    return s;
}

}  // namespace

void save(const std::string& path, std::uint64_t config_hash, const std::string& tag,
          const std::vector<const gcn::Tensor*>& tensors) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write checkpoint: " + path);
    os.write(kMagic, 8);
    write_u32(os, kVersion);
    write_u64(os, config_hash);
    write_string(os, tag);
    write_u32(os, static_cast<std::uint32_t>(tensors.size()));
    for (const gcn::Tensor* t : tensors) {
        write_string(os, t->name);
        write_u32(os, static_cast<std::uint32_t>(t->value.rows()));
        write_u32(os, static_cast<std::uint32_t>(t->value.cols()));
        write_doubles(os, t->value.data());
    }
    if (!os) throw DataError("checkpoint write failed: " + path);
}

void load(const std::string& path, std::uint64_t config_hash, const std::string& expected_tag,
          const std::vector<gcn::Tensor*>& tensors) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open checkpoint (untrained head?): " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0) {
        throw DataError("not a checkpoint file: " + path);
    }
    const std::uint32_t version = read_u32(is);
    if (version != kVersion) {
        throw DataError("unsupported checkpoint version " + std::to_string(version) + " in " +
                        path);
    }
    const std::uint64_t hash = read_u64(is);
    if (hash != config_hash) {
        throw ConfigError("checkpoint " + path +
                          " was produced with a different configuration; retrain or fix config");
    }
    const std::string tag = read_string(is);
    if (tag != expected_tag) {
        throw DataError("checkpoint " + path + " holds head \"" + tag + "\", expected \"" +
                        expected_tag + "\"");
    }
    const std::uint32_t count = read_u32(is);
    if (count != tensors.size()) {
        throw DataError("checkpoint " + path + " has " + std::to_string(count) +
                        " tensors, expected " + std::to_string(tensors.size()));
    }
    std::map<std::string, gcn::Tensor*> by_name;
    for (gcn::Tensor* t : tensors) by_name[t->name] = t;
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::string name = read_string(is);
        const std::uint32_t rows = read_u32(is);
        const std::uint32_t cols = read_u32(is);
        auto it = by_name.find(name);
        if (it == by_name.end()) {
            throw DataError("checkpoint " + path + " has unexpected tensor \"" + name + "\"");
        }
        gcn::Tensor* t = it->second;
        if (t->value.rows() != rows || t->value.cols() != cols) {
            throw DataError("checkpoint tensor \"" + name + "\" shape mismatch in " + path);
        }
        for (std::size_t j = 0; j < t->value.size(); ++j) {
            const std::uint64_t bits = read_u64(is);
            double x;
            std::memcpy(&x, &bits, 8);
            t->value.data()[j] = x;
        }
        by_name.erase(it);
    }
    if (!is) throw DataError("truncated checkpoint: " + path);
}

}  // namespace higemine::checkpoint
