#include "scalelab/seed.hpp"

#include "scalelab/error.hpp"

namespace scalelab {

namespace {

struct CategorySeed {
    const char* name;
    std::vector<const char*> problems;
};

const std::vector<CategorySeed>& taxonomy() {
    static const std::vector<CategorySeed> t = {
        {"Linear Algebra", {"Vector Dot Product", "Matrix Multiplication"}},
        {"Reduction, Scan, Sort", {"Array Sum", "Scan", "Quicksort"}},
        {"Image Processing", {"Grayscale conversion", "Median filtering"}},
        {"Divide and Conquer", {"Monte Carlo", "Pi using Series Sum"}},
    };
    return t;
}

std::string_view required(std::string_view name) {
    auto f = embedded_file(name);
    if (!f) throw Error(ErrorCode::IoError, "embedded file missing: " + std::string(name));
    return *f;
}

}  // namespace

std::optional<std::string_view> embedded_file(std::string_view name) {
    for (const EmbeddedFile& f : embedded_files()) {
        if (f.name == name) return f.content;
    }
    return std::nullopt;
}

std::vector<EmbeddedFile> seed_upload_files() {
    std::vector<EmbeddedFile> out;
    for (const EmbeddedFile& f : embedded_files()) {
        if (f.name.starts_with("seed/")) out.push_back(f);
    }
    return out;
}

Machine seed_machine(int index) {
    if (index != 1 && index != 2) throw Error(ErrorCode::NotFound, "no seed machine " + std::to_string(index));
    const std::string stem = "probes/machine" + std::to_string(index);
    const std::vector<MachineFacts> facts = {parse_lscpu(required(stem + ".lscpu")),
                                             parse_proc_cpuinfo(required(stem + ".cpuinfo"))};
    MachineOverrides o;
    o.label = "Machine " + std::to_string(index);
    o.fields.max_memory_bandwidth_gbps = index == 1 ? 59.0 : 25.6;
    return merge_machine_facts(facts, o);
}

SeedResult seed_store(Store& store) {
    std::vector<ResultUpload> uploads;
    for (const EmbeddedFile& f : seed_upload_files()) uploads.push_back(parse_results_file(f.content));
    const Machine machines[] = {seed_machine(1), seed_machine(2)};

    return store.write([&](StoreWriter& w) {
        SeedResult result;
        for (const CategorySeed& c : taxonomy()) {
            auto category = w.find_category(c.name);
            const EntityId cid = category ? category->id : w.put(Category{{}, c.name});
            result.categories.push_back(cid);
            for (const char* p : c.problems) {
                if (!w.find_problem(cid, p)) w.put(Problem{{}, cid, p});
            }
        }
        for (const Machine& m : machines) {
            if (auto existing = w.find_machine(m.label)) {
                Machine probe = m;
                probe.id = existing->id;
                if (!(probe == *existing)) {
                    throw Error(ErrorCode::ConflictError, "store holds a different '" + m.label + "'");
                }
                result.machines.push_back(existing->id);
            } else {
                result.machines.push_back(w.put(m));
            }
        }
        for (const ResultUpload& u : uploads) result.commits.push_back(commit_upload(u, w, "2019-04-01T00:00:00Z"));
        return result;
    });
}

}  // namespace scalelab
