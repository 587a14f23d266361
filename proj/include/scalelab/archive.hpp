#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace scalelab {

struct ArchiveEntry {
    std::string name;  // relative path, '/' separated
    std::string content;

    friend bool operator==(const ArchiveEntry&, const ArchiveEntry&) = default;
};

/// POSIX ustar archive with fixed metadata (mode 0644, owner 0, mtime 0), so equal
/// entries give byte-identical archives.
std::string write_tar(const std::vector<ArchiveEntry>& entries);

/// Regular-file entries of a ustar archive, in archive order.
std::vector<ArchiveEntry> read_tar(std::string_view archive);

}  // namespace scalelab
