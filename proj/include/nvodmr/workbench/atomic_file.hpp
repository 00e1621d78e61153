#pragma once

#include <string>

namespace nvodmr::workbench {

// Writes to a temporary file in the same directory, then renames it over `path`,
// so readers never see a partial file. Parent directories are created.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace nvodmr::workbench
