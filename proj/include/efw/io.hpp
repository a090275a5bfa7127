#pragma once

#include <filesystem>
#include <string>

namespace efw {

/// Whole-file read; throws ParseError if the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes to "<path>.tmp" then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// HTTP(S) GET of `url`. Throws Error with a diagnostic when the transfer
/// fails or the build has no libcurl.
std::string fetch_url(const std::string& url);

}  // namespace efw
