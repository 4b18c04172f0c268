#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "higemine/gcn.hpp"

namespace higemine::checkpoint {

// Little-endian binary container: magic, format version, config hash, a tag
// naming the head, then each tensor as (name, rows, cols, raw doubles).
// Writing the same parameters twice yields byte-identical files.
void save(const std::string& path, std::uint64_t config_hash, const std::string& tag,
          const std::vector<const gcn::Tensor*>& tensors);

// Loads values into the given tensors, matched by name; every tensor must be
// present with the recorded shape, and the file may not contain extras.
// A config hash mismatch is rejected.
void load(const std::string& path, std::uint64_t config_hash, const std::string& expected_tag,
          const std::vector<gcn::Tensor*>& tensors);

inline std::vector<const gcn::Tensor*> freeze(const std::vector<gcn::Tensor*>& tensors) {
    return {tensors.begin(), tensors.end()};
}

}  // namespace higemine::checkpoint
