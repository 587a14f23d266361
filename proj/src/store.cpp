#include "scalelab/store.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "scalelab/error.hpp"

namespace scalelab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kFormatFile = "FORMAT";
constexpr const char* kFormatLine = "scalelab-archive 1";
constexpr const char* kResultsDir = "results";

EntityId dimension_value(const Configuration& c, Dimension d) {
    switch (d) {
        case Dimension::Approach: return c.approach_id;
        case Dimension::Machine: return c.machine_id;
        case Dimension::Environment: return c.environment_id;
    }
    return {};
}

[[noreturn]] void duplicate(std::string_view what, const std::string& key) {
    throw Error(ErrorCode::DuplicateError, std::string(what) + " '" + key + "' already exists",
                {{"kind", what}, {"key", key}});
}

[[noreturn]] void dangling(std::string_view what, EntityId id) {
    throw Error(ErrorCode::IntegrityError, "reference to unknown " + std::string(what) + " " + to_string(id),
                {{"kind", what}, {"id", id.value}});
}

void require(bool ok, const std::string& message) {
    if (!ok) throw Error(ErrorCode::ValidationError, message);
}

fs::path document_path(EntityKind kind, EntityId id) {
    return fs::path(std::string(directory_of(kind))) / (to_string(id) + ".json");
}

fs::path result_path(EntityId configuration_id) {
    return fs::path(kResultsDir) / (to_string(configuration_id) + ".json");
}

void write_file_atomically(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string render_document(const json& doc) {
    return doc.dump(2) + "\n";
}

std::vector<Option> to_options(const StoreView& view, Dimension d, const std::set<EntityId>& ids) {
    std::vector<Option> out;
    for (EntityId id : ids) out.push_back({to_string(id), view.dimension_label(d, id)});
    return out;
}

}  // namespace

std::string_view directory_of(EntityKind kind) {
    switch (kind) {
        case EntityKind::Category: return "categories";
        case EntityKind::Problem: return "problems";
        case EntityKind::Approach: return "approaches";
        case EntityKind::Machine: return "machines";
        case EntityKind::Environment: return "environments";
        case EntityKind::Configuration: return "configurations";
    }
    return "categories";
}

// ---------------------------------------------------------------------------
// StoreView

template <>
const StoreView::Table<Category>& StoreView::table<Category>() const { return categories_; }
template <>
const StoreView::Table<Problem>& StoreView::table<Problem>() const { return problems_; }
template <>
const StoreView::Table<Approach>& StoreView::table<Approach>() const { return approaches_; }
template <>
const StoreView::Table<Machine>& StoreView::table<Machine>() const { return machines_; }
template <>
const StoreView::Table<Environment>& StoreView::table<Environment>() const { return environments_; }
template <>
const StoreView::Table<Configuration>& StoreView::table<Configuration>() const { return configurations_; }

template <class T>
StoreView::Table<T>& StoreView::table() {
    return const_cast<Table<T>&>(static_cast<const StoreView*>(this)->table<T>());
}

template <class T>
const T& StoreView::get(EntityId id) const {
    const auto& t = table<T>();
    auto it = t.find(id);
    if (it == t.end()) {
        throw Error(ErrorCode::NotFound, std::string(to_string(T::kind)) + " " + to_string(id) + " not found",
                    {{"kind", to_string(T::kind)}, {"id", id.value}});
    }
    return it->second;
}

template <class T>
std::vector<T> StoreView::list() const {
    std::vector<T> out;
    out.reserve(table<T>().size());
    for (const auto& [id, e] : table<T>()) out.push_back(e);
    return out;
}

#define SCALELAB_INSTANTIATE(T)                         \
    template const T& StoreView::get<T>(EntityId) const; \
    template std::vector<T> StoreView::list<T>() const;
SCALELAB_INSTANTIATE(Category)
SCALELAB_INSTANTIATE(Problem)
SCALELAB_INSTANTIATE(Approach)
SCALELAB_INSTANTIATE(Machine)
SCALELAB_INSTANTIATE(Environment)
SCALELAB_INSTANTIATE(Configuration)
#undef SCALELAB_INSTANTIATE

std::vector<Problem> StoreView::problems_of(EntityId category_id) const {
    std::vector<Problem> out;
    for (const auto& [id, p] : problems_) {
        if (p.category_id == category_id) out.push_back(p);
    }
    return out;
}

std::vector<Approach> StoreView::approaches_of(EntityId problem_id) const {
    std::vector<Approach> out;
    for (const auto& [id, a] : approaches_) {
        if (a.problem_id == problem_id) out.push_back(a);
    }
    return out;
}

std::optional<Category> StoreView::find_category(std::string_view name) const {
    for (const auto& [id, c] : categories_) {
        if (c.name == name) return c;
    }
    return std::nullopt;
}

std::optional<Problem> StoreView::find_problem(EntityId category_id, std::string_view name) const {
    for (const auto& [id, p] : problems_) {
        if (p.category_id == category_id && p.name == name) return p;
    }
    return std::nullopt;
}

std::optional<Approach> StoreView::find_approach(EntityId problem_id, std::string_view title) const {
    for (const auto& [id, a] : approaches_) {
        if (a.problem_id == problem_id && a.title == title) return a;
    }
    return std::nullopt;
}

std::optional<Machine> StoreView::find_machine(std::string_view label) const {
    for (const auto& [id, m] : machines_) {
        if (m.label == label) return m;
    }
    return std::nullopt;
}

std::optional<Environment> StoreView::find_environment(std::string_view os, std::string_view compiler,
                                                       std::string_view framework) const {
    for (const auto& [id, e] : environments_) {
        if (e.os_name_version == os && e.compiler_name_version == compiler && e.parallel_framework_version == framework)
            return e;
    }
    return std::nullopt;
}

std::optional<Configuration> StoreView::find_configuration(const Configuration& probe) const {
    for (const auto& [id, c] : configurations_) {
        if (c.problem_id == probe.problem_id && c.approach_id == probe.approach_id &&
            c.machine_id == probe.machine_id && c.environment_id == probe.environment_id &&
            c.memory_model == probe.memory_model && c.problem_size == probe.problem_size &&
            c.thread_count == probe.thread_count && c.contributor == probe.contributor)
            return c;
    }
    return std::nullopt;
}

const ResultRecord* StoreView::find_result(EntityId configuration_id) const {
    auto it = results_.find(configuration_id);
    return it == results_.end() ? nullptr : &it->second;
}

std::vector<ResultRecord> StoreView::results() const {
    std::vector<ResultRecord> out;
    for (const auto& [id, r] : results_) out.push_back(r);
    return out;
}

bool StoreView::empty() const {
    return categories_.empty() && problems_.empty() && approaches_.empty() && machines_.empty() &&
           environments_.empty() && configurations_.empty() && results_.empty();
}

std::string StoreView::dimension_label(Dimension d, EntityId id) const {
    switch (d) {
        case Dimension::Approach: return display_name(get<Approach>(id));
        case Dimension::Machine: return display_name(get<Machine>(id));
        case Dimension::Environment: return display_name(get<Environment>(id));
    }
    return {};
}

std::vector<std::string> StoreView::integrity_violations() const {
    std::vector<std::string> out;
    auto check = [&](bool ok, const std::string& what) {
        if (!ok) out.push_back(what);
    };
    for (const auto& [id, p] : problems_) {
        check(categories_.count(p.category_id) == 1, "problem " + to_string(id) + " -> category");
    }
    for (const auto& [id, a] : approaches_) {
        check(problems_.count(a.problem_id) == 1, "approach " + to_string(id) + " -> problem");
    }
    for (const auto& [id, c] : configurations_) {
        const std::string who = "configuration " + to_string(id);
        check(problems_.count(c.problem_id) == 1, who + " -> problem");
        check(machines_.count(c.machine_id) == 1, who + " -> machine");
        check(environments_.count(c.environment_id) == 1, who + " -> environment");
        auto a = approaches_.find(c.approach_id);
        check(a != approaches_.end() && a->second.problem_id == c.problem_id, who + " -> approach");
    }
    for (const auto& [id, r] : results_) {
        check(configurations_.count(id) == 1, "result " + to_string(id) + " -> configuration");
    }
    return out;
}

OptionSet StoreView::list_options(const FilterSelection& s, const AccessContext& viewer) const {
    // Fields must be filled in protocol order; a set field after the first unset one is rejected.
    std::optional<Dimension> fixed1, fixed2;
    if (s.basis) {
        require(s.fixed_choices.count(*s.basis) == 0, "the basis dimension cannot also be fixed");
        const auto dims = fixed_dimensions(*s.basis);
        fixed1 = dims[0];
        fixed2 = dims[1];
    }
    const bool set[] = {
        s.category_id.has_value(),
        s.problem_id.has_value(),
        s.memory_model.has_value(),
        s.basis.has_value(),
        !s.basis_instance_ids.empty(),
        fixed1 && s.fixed_choices.count(*fixed1) == 1,
        fixed2 && s.fixed_choices.count(*fixed2) == 1,
    };
    const std::size_t fields = std::size(set);
    std::size_t first_unset = 0;
    while (first_unset < fields && set[first_unset]) ++first_unset;
    for (std::size_t i = first_unset + 1; i < fields; ++i) {
        if (set[i]) {
            throw Error(ErrorCode::ProtocolOrder, "selection fields must be set in order",
                        {{"first_unset", first_unset}, {"set_field", i}});
        }
    }
    if (!s.basis && !s.fixed_choices.empty()) {
        throw Error(ErrorCode::ProtocolOrder, "fixed choices need a basis first");
    }

    if (s.category_id) get<Category>(*s.category_id);
    if (s.problem_id) {
        require(get<Problem>(*s.problem_id).category_id == *s.category_id, "problem is not in the selected category");
    }
    {
        std::set<EntityId> seen(s.basis_instance_ids.begin(), s.basis_instance_ids.end());
        require(seen.size() == s.basis_instance_ids.size(), "basis instances must be distinct");
    }
    for (EntityId id : s.basis_instance_ids) dimension_label(*s.basis, id);
    for (const auto& [dim, id] : s.fixed_choices) dimension_label(dim, id);

    // Visible configurations that actually hold data of the requested timing kind.
    std::vector<const Configuration*> rows;
    for (const auto& [id, c] : configurations_) {
        if (!viewer.can_see(c)) continue;
        const ResultRecord* r = find_result(id);
        if (r == nullptr || !r->runs(s.timing_kind)) continue;
        rows.push_back(&c);
    }

    OptionSet out;
    if (!s.category_id) {
        out.step = SelectionStep::Category;
        std::set<EntityId> have;
        for (const Configuration* c : rows) have.insert(get<Problem>(c->problem_id).category_id);
        for (EntityId id : have) out.values.push_back({to_string(id), get<Category>(id).name});
        return out;
    }
    std::erase_if(rows, [&](const Configuration* c) { return get<Problem>(c->problem_id).category_id != *s.category_id; });
    if (!s.problem_id) {
        out.step = SelectionStep::Problem;
        std::set<EntityId> have;
        for (const Configuration* c : rows) have.insert(c->problem_id);
        for (EntityId id : have) out.values.push_back({to_string(id), get<Problem>(id).name});
        return out;
    }
    std::erase_if(rows, [&](const Configuration* c) { return c->problem_id != *s.problem_id; });
    if (!s.memory_model) {
        out.step = SelectionStep::MemoryModel;
        std::set<MemoryModel> have;
        for (const Configuration* c : rows) have.insert(c->memory_model);
        for (MemoryModel m : have) out.values.push_back({std::string(to_string(m)), std::string(to_string(m))});
        return out;
    }
    std::erase_if(rows, [&](const Configuration* c) { return c->memory_model != *s.memory_model; });
    if (!s.basis) {
        out.step = SelectionStep::Basis;
        if (!rows.empty()) {
            for (Dimension d : kAllDimensions) out.values.push_back({std::string(to_string(d)), std::string(to_string(d))});
        }
        return out;
    }

    const Dimension basis = *s.basis;
    // (fixed1 value, fixed2 value) pairs that have data, per basis instance.
    using Pair = std::pair<EntityId, EntityId>;
    std::map<EntityId, std::set<Pair>> pairs;
    for (const Configuration* c : rows) {
        pairs[dimension_value(*c, basis)].insert({dimension_value(*c, *fixed1), dimension_value(*c, *fixed2)});
    }
    auto joint = [&](const std::vector<EntityId>& instances) {
        std::set<Pair> acc;
        bool first = true;
        for (EntityId i : instances) {
            auto it = pairs.find(i);
            if (it == pairs.end()) return std::set<Pair>{};
            if (first) {
                acc = it->second;
                first = false;
            } else {
                std::set<Pair> next;
                std::set_intersection(acc.begin(), acc.end(), it->second.begin(), it->second.end(),
                                      std::inserter(next, next.end()));
                acc = std::move(next);
            }
        }
        return acc;
    };

    if (s.basis_instance_ids.empty()) {
        out.step = SelectionStep::BasisInstances;
        out.dimension = basis;
        std::set<EntityId> have;
        for (const auto& [id, p] : pairs) have.insert(id);
        out.values = to_options(*this, basis, have);
        return out;
    }

    const std::set<Pair> common = joint(s.basis_instance_ids);
    const auto fixed1_it = s.fixed_choices.find(*fixed1);
    if (fixed1_it == s.fixed_choices.end()) {
        out.step = SelectionStep::FixedChoice;
        out.dimension = *fixed1;
        std::set<EntityId> have;
        for (const Pair& p : common) have.insert(p.first);
        out.values = to_options(*this, *fixed1, have);

        std::set<EntityId> more;
        for (const auto& [id, p] : pairs) {
            if (std::find(s.basis_instance_ids.begin(), s.basis_instance_ids.end(), id) != s.basis_instance_ids.end())
                continue;
            std::vector<EntityId> extended = s.basis_instance_ids;
            extended.push_back(id);
            if (!joint(extended).empty()) more.insert(id);
        }
        out.additional_instances = to_options(*this, basis, more);
        return out;
    }

    if (s.fixed_choices.count(*fixed2) == 0) {
        out.step = SelectionStep::FixedChoice;
        out.dimension = *fixed2;
        std::set<EntityId> have;
        for (const Pair& p : common) {
            if (p.first == fixed1_it->second) have.insert(p.second);
        }
        out.values = to_options(*this, *fixed2, have);
        return out;
    }

    out.step = SelectionStep::Complete;
    return out;
}

std::vector<QueryRow> StoreView::query(const FilterSelection& s, const AccessContext& viewer,
                                       const DataScope& scope) const {
    require(s.category_id && s.problem_id && s.memory_model && s.basis, "selection is incomplete");
    require(!s.basis_instance_ids.empty(), "selection needs at least one basis instance");
    const auto dims = fixed_dimensions(*s.basis);
    require(s.fixed_choices.size() == 2 && s.fixed_choices.count(dims[0]) == 1 && s.fixed_choices.count(dims[1]) == 1,
            "fixed choices must cover exactly the two non-basis dimensions");
    std::set<EntityId> distinct(s.basis_instance_ids.begin(), s.basis_instance_ids.end());
    require(distinct.size() == s.basis_instance_ids.size(), "basis instances must be distinct");

    auto validated = [&](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NotFound) throw Error(ErrorCode::ValidationError, e.what(), e.detail());
            throw;
        }
    };
    validated([&] {
        get<Category>(*s.category_id);
        require(get<Problem>(*s.problem_id).category_id == *s.category_id, "problem is not in the selected category");
        for (EntityId id : s.basis_instance_ids) dimension_label(*s.basis, id);
        for (const auto& [dim, id] : s.fixed_choices) dimension_label(dim, id);
    });

    std::vector<QueryRow> out;
    for (const auto& [id, c] : configurations_) {
        if (c.problem_id != *s.problem_id || c.memory_model != *s.memory_model) continue;
        if (!viewer.can_see(c) || !scope.admits(c)) continue;
        if (!distinct.count(dimension_value(c, *s.basis))) continue;
        bool fixed_ok = true;
        for (const auto& [dim, want] : s.fixed_choices) fixed_ok = fixed_ok && dimension_value(c, dim) == want;
        if (!fixed_ok) continue;
        const ResultRecord* r = find_result(id);
        if (r == nullptr || !r->runs(s.timing_kind)) continue;
        out.push_back({c, *r});
    }
    auto rank = [&](const Configuration& c) {
        const EntityId v = dimension_value(c, *s.basis);
        return std::find(s.basis_instance_ids.begin(), s.basis_instance_ids.end(), v) - s.basis_instance_ids.begin();
    };
    std::sort(out.begin(), out.end(), [&](const QueryRow& a, const QueryRow& b) {
        const Configuration& x = a.configuration;
        const Configuration& y = b.configuration;
        return std::make_tuple(rank(x), x.thread_count, x.problem_size, x.contributor, x.id) <
               std::make_tuple(rank(y), y.thread_count, y.problem_size, y.contributor, y.id);
    });
    return out;
}

// ---------------------------------------------------------------------------
// StoreWriter

namespace {

void check_cache(const std::optional<std::int64_t>& kb, const char* name) {
    require(!kb || *kb > 0, std::string(name) + " must be positive");
}

}  // namespace

template <class T>
EntityId StoreWriter::commit(T e) {
    auto& t = table<T>();
    if (e.id) {
        auto it = t.find(e.id);
        if (it == t.end()) get<T>(e.id);  // throws NotFound
        if (it->second == e) return e.id;
        it->second = e;
    } else {
        e.id = EntityId{next_id_++};
        t.emplace(e.id, e);
    }
    if (root_) {
        json doc = e;
        write_document(document_path(T::kind, e.id), doc);
    }
    return e.id;
}

EntityId StoreWriter::put(Category e) {
    require(!e.name.empty(), "category name must not be empty");
    for (const auto& [id, c] : categories_) {
        if (id != e.id && c.name == e.name) duplicate("category", e.name);
    }
    return commit(std::move(e));
}

EntityId StoreWriter::put(Problem e) {
    require(!e.name.empty(), "problem name must not be empty");
    if (!categories_.count(e.category_id)) dangling("category", e.category_id);
    for (const auto& [id, p] : problems_) {
        if (id != e.id && p.category_id == e.category_id && p.name == e.name) duplicate("problem", e.name);
    }
    return commit(std::move(e));
}

EntityId StoreWriter::put(Approach e) {
    require(!e.title.empty(), "approach title must not be empty");
    if (!problems_.count(e.problem_id)) dangling("problem", e.problem_id);
    for (const auto& [id, a] : approaches_) {
        if (id != e.id && a.problem_id == e.problem_id && a.title == e.title) duplicate("approach", e.title);
    }
    return commit(std::move(e));
}

EntityId StoreWriter::put(Machine e) {
    require(!e.label.empty(), "machine label must not be empty");
    require(e.base_clock_ghz > 0.0, "base clock must be positive");
    require(e.physical_cores >= 1, "physical core count must be >= 1");
    require(!e.logical_cpus || *e.logical_cpus >= 1, "logical cpu count must be >= 1");
    check_cache(e.l1_kb, "l1_kb");
    check_cache(e.l2_kb, "l2_kb");
    check_cache(e.l3_kb, "l3_kb");
    require(!e.max_memory_bandwidth_gbps || *e.max_memory_bandwidth_gbps > 0.0, "memory bandwidth must be positive");
    for (const auto& [id, m] : machines_) {
        if (id != e.id && m.label == e.label) duplicate("machine", e.label);
    }
    return commit(std::move(e));
}

EntityId StoreWriter::put(Environment e) {
    require(!e.os_name_version.empty() && !e.compiler_name_version.empty() && !e.parallel_framework_version.empty(),
            "environment fields must not be empty");
    for (const auto& [id, env] : environments_) {
        if (id != e.id && env.os_name_version == e.os_name_version &&
            env.compiler_name_version == e.compiler_name_version &&
            env.parallel_framework_version == e.parallel_framework_version)
            duplicate("environment", display_name(e));
    }
    return commit(std::move(e));
}

EntityId StoreWriter::put(Configuration e) {
    require(e.problem_size > 0, "problem size must be positive");
    require(e.thread_count >= 1, "thread count must be >= 1");
    if (!problems_.count(e.problem_id)) dangling("problem", e.problem_id);
    auto a = approaches_.find(e.approach_id);
    if (a == approaches_.end()) dangling("approach", e.approach_id);
    if (a->second.problem_id != e.problem_id) {
        throw Error(ErrorCode::IntegrityError, "approach belongs to a different problem");
    }
    if (!machines_.count(e.machine_id)) dangling("machine", e.machine_id);
    if (!environments_.count(e.environment_id)) dangling("environment", e.environment_id);
    if (auto existing = find_configuration(e); existing && existing->id != e.id) {
        duplicate("configuration", to_string(existing->id));
    }
    return commit(std::move(e));
}

void StoreWriter::put_result(ResultRecord r) {
    if (!configurations_.count(r.configuration_id)) dangling("configuration", r.configuration_id);
    require(r.run_set_alg || r.run_set_e2e, "a result record needs at least one run set");
    for (TimingKind kind : {TimingKind::Alg, TimingKind::E2E}) {
        if (const auto& runs = r.runs(kind)) {
            runs->validate();
            require(runs->timing_kind == kind, "run set stored under the wrong timing kind");
        }
    }
    auto it = results_.find(r.configuration_id);
    if (it != results_.end() && it->second == r) return;
    const EntityId id = r.configuration_id;
    results_[id] = r;
    if (root_) {
        json doc = r;
        write_document(result_path(id), doc);
    }
}

void StoreWriter::write_document(const fs::path& rel, const json& doc) const {
    write_file_atomically(*root_ / rel, render_document(doc));
}

// ---------------------------------------------------------------------------
// Store

Store::Store() = default;
Store::~Store() = default;

void Store::persist(const fs::path& root) const {
    std::shared_lock lock(mutex_);
    if (fs::exists(root) && !fs::is_empty(root)) {
        throw Error(ErrorCode::IoError, "persist target " + root.string() + " is not empty");
    }
    fs::create_directories(root);
    write_file_atomically(root / kFormatFile, std::string(kFormatLine) + "\n");
    auto dump = [&](auto kind_tag, const auto& tbl) {
        using T = typename std::decay_t<decltype(tbl)>::mapped_type;
        (void)kind_tag;
        fs::create_directories(root / std::string(directory_of(T::kind)));
        for (const auto& [id, e] : tbl) {
            json doc = e;
            write_file_atomically(root / document_path(T::kind, id), render_document(doc));
        }
    };
    dump(0, state_.categories_);
    dump(0, state_.problems_);
    dump(0, state_.approaches_);
    dump(0, state_.machines_);
    dump(0, state_.environments_);
    dump(0, state_.configurations_);
    fs::create_directories(root / kResultsDir);
    for (const auto& [id, r] : state_.results_) {
        json doc = r;
        write_file_atomically(root / result_path(id), render_document(doc));
    }
}

namespace {

std::vector<fs::path> documents_in(const fs::path& dir) {
    std::vector<fs::path> out;
    if (!fs::is_directory(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return json::parse(buf.str());
}

}  // namespace

LoadResult Store::load(const fs::path& root) {
    LoadResult out;
    out.store = std::make_unique<Store>();
    StoreWriter& w = out.store->state_;

    if (fs::exists(root / kFormatFile)) {
        std::ifstream in(root / kFormatFile);
        std::string line;
        std::getline(in, line);
        if (line != kFormatLine) {
            throw Error(ErrorCode::RecordCorrupt, "unsupported archive format '" + line + "'",
                        {{"file", (root / kFormatFile).string()}});
        }
    }

    // Restores one entity under its stored id, through the same validation as a put.
    auto restore = [&](auto tag, const fs::path& path) {
        using T = decltype(tag);
        try {
            T e = read_json_file(path).get<T>();
            if (path.stem().string() != to_string(e.id) || !e.id) {
                throw Error(ErrorCode::RecordCorrupt, "document id does not match its file name");
            }
            if (w.table<T>().count(e.id)) throw Error(ErrorCode::RecordCorrupt, "id used twice");
            auto& t = w.table<T>();
            const EntityId id = e.id;
            // Insert a placeholder so the put takes the update path and keeps the id.
            t.emplace(id, T{});
            t.at(id).id = id;
            try {
                w.put(e);
            } catch (...) {
                t.erase(id);
                throw;
            }
            w.next_id_ = std::max(w.next_id_, id.value + 1);
        } catch (const std::exception& ex) {
            out.corrupt.push_back({path, ex.what()});
        }
    };

    for (const fs::path& p : documents_in(root / "categories")) restore(Category{}, p);
    for (const fs::path& p : documents_in(root / "problems")) restore(Problem{}, p);
    for (const fs::path& p : documents_in(root / "approaches")) restore(Approach{}, p);
    for (const fs::path& p : documents_in(root / "machines")) restore(Machine{}, p);
    for (const fs::path& p : documents_in(root / "environments")) restore(Environment{}, p);
    for (const fs::path& p : documents_in(root / "configurations")) restore(Configuration{}, p);
    for (const fs::path& p : documents_in(root / kResultsDir)) {
        try {
            ResultRecord r = read_json_file(p).get<ResultRecord>();
            if (p.stem().string() != to_string(r.configuration_id)) {
                throw Error(ErrorCode::RecordCorrupt, "document id does not match its file name");
            }
            w.put_result(std::move(r));
        } catch (const std::exception& ex) {
            out.corrupt.push_back({p, ex.what()});
        }
    }
    return out;
}

std::unique_ptr<Store> Store::open(const fs::path& root, std::vector<CorruptRecord>* corrupt) {
    LoadResult loaded = load(root);
    if (corrupt) *corrupt = std::move(loaded.corrupt);
    fs::create_directories(root);
    if (!fs::exists(root / kFormatFile)) write_file_atomically(root / kFormatFile, std::string(kFormatLine) + "\n");
    loaded.store->state_.root_ = root;
    return std::move(loaded.store);
}

}  // namespace scalelab
