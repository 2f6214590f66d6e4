#pragma once

#include <filesystem>
#include <variant>

#include "hebbd/model.hpp"

namespace hebbd {

// Binary container, all fields little-endian:
//   "HDN1"  u32 n  u32 m  u8 enc_act  u8 dec_act (0xFF for a plain layer)
//   f64 W[n*m] row-major, b[m], c[n] (auto-encoder only), mu[n],
//   lambda[m] (auto-encoder only),
//   f64 p1, p2 for enc_act, then for dec_act (auto-encoder only)
using Model = std::variant<CenteredLayer, TiedAutoEncoder>;

void save_model(const std::filesystem::path& path, const Model& model);
// Throws ParseError with the byte offset of the first bad field.
Model load_model(const std::filesystem::path& path);

}  // namespace hebbd
