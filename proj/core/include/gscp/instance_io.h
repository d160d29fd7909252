#ifndef GSCP_INSTANCE_IO_H_
#define GSCP_INSTANCE_IO_H_

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>

#include "gscp/instance.h"

namespace gscp {

// OR-Library set-cover format. Whitespace-separated tokens:
//   m n
//   c_1 ... c_n
//   for each row i: k_i followed by k_i 1-based column indices
// Line breaks carry no meaning. Errors: kTruncatedStream,
// kIndexOutOfRange, kNonPositiveCount.
ScpInstance parse_orlib(std::istream& in, const std::string& name);
ScpInstance parse_orlib_string(const std::string& text, const std::string& name);
void write_orlib(const ScpInstance& inst, std::ostream& out);
std::string write_orlib_string(const ScpInstance& inst);

// Native structured-text format (JSON):
//   {"format_version": "scp-1", "name": ..., "m": ..., "n": ...,
//    "costs": [...], "rows": [[0-based column indices], ...]}
// Whole costs are written as integers and fractional ones as exact decimal
// strings. Errors: kMalformedFile, kVersionMismatch, kIoFailure.
inline constexpr const char* kNativeFormatVersion = "scp-1";

std::string to_native_string(const ScpInstance& inst);
ScpInstance from_native_string(const std::string& text);
void write_native(const ScpInstance& inst, const std::filesystem::path& path);
ScpInstance read_native(const std::filesystem::path& path);

// Reads a whole file into memory. Throws Error(kIoFailure).
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace gscp

#endif  // GSCP_INSTANCE_IO_H_
