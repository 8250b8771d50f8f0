#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "sentiment/model.hpp"

namespace sentiment {

inline constexpr std::uint32_t kModelFormatVersion = 1;

// Model file layout, all integers little-endian:
//   "SNTMODEL"                       8-byte magic
//   u32 format version
//   u8 variant, u8 activation
//   u64 seq_len, embed_dim, window, filters, hidden
//   u64 token count, then per token: u32 byte length + bytes (id order)
//   u64 tensor count, then per tensor: u64 rows, u64 cols, rows*cols IEEE-754 doubles
//   u32 CRC-32 of every preceding byte

std::string serialize_model(const Model& model);
/// Throws CorruptFile (bad magic, checksum, truncation or inconsistent
/// shapes) or FormatVersionMismatch.
Model deserialize_model(std::string_view bytes);

void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace sentiment
