#pragma once

#include <string>
#include <vector>

namespace glocal {
namespace tar {

struct Entry {
    std::string name;
    std::string data;
};

// Plain ustar archive with regular files only. Headers carry fixed
// owner/mode/mtime fields so the bytes depend solely on the entries.
std::string write_archive(const std::vector<Entry>& entries);
std::vector<Entry> read_archive(const std::string& bytes);

} // namespace tar
} // namespace glocal
