#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scalelab/ingest.hpp"

namespace scalelab {

/// A data file compiled into the library; `name` is relative to data/.
struct EmbeddedFile {
    std::string_view name;
    std::string_view content;
};

std::span<const EmbeddedFile> embedded_files();
std::optional<std::string_view> embedded_file(std::string_view name);

/// The shipped seed uploads (synthetic, see tools/seedgen.cpp), in commit order.
std::vector<EmbeddedFile> seed_upload_files();

/// Case-study machine built from its embedded lscpu and cpuinfo captures plus the
/// memory bandwidth, which no probe reports. `index` is 1 or 2.
Machine seed_machine(int index);

struct SeedResult {
    std::vector<EntityId> categories;
    std::vector<EntityId> machines;
    std::vector<CommitResult> commits;
};

/// Adds the problem taxonomy, both machines and every seed upload. Running it on an
/// already seeded store changes nothing.
SeedResult seed_store(Store& store);

}  // namespace scalelab
