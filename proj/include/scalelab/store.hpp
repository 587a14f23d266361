#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "scalelab/entities.hpp"
#include "scalelab/selection.hpp"

namespace scalelab {

struct QueryRow {
    Configuration configuration;
    ResultRecord record;
};

struct CorruptRecord {
    std::filesystem::path file;
    std::string message;
};

/// Unlocked read access to the archive contents. Obtained through Store::read or Store::write.
class StoreView {
public:
    template <class T>
    const T& get(EntityId id) const;

    template <class T>
    std::vector<T> list() const;

    std::vector<Problem> problems_of(EntityId category_id) const;
    std::vector<Approach> approaches_of(EntityId problem_id) const;

    std::optional<Category> find_category(std::string_view name) const;
    std::optional<Problem> find_problem(EntityId category_id, std::string_view name) const;
    std::optional<Approach> find_approach(EntityId problem_id, std::string_view title) const;
    std::optional<Machine> find_machine(std::string_view label) const;
    std::optional<Environment> find_environment(std::string_view os, std::string_view compiler,
                                                std::string_view framework) const;
    /// Matches on every identifying field except the id.
    std::optional<Configuration> find_configuration(const Configuration& probe) const;

    const ResultRecord* find_result(EntityId configuration_id) const;
    std::vector<ResultRecord> results() const;

    bool empty() const;

    OptionSet list_options(const FilterSelection& partial, const AccessContext& viewer) const;
    std::vector<QueryRow> query(const FilterSelection& selection, const AccessContext& viewer,
                                const DataScope& scope = {}) const;

    /// Full scan for dangling references; empty when the archive is consistent.
    std::vector<std::string> integrity_violations() const;

    /// Display name of the entity a dimension refers to.
    std::string dimension_label(Dimension d, EntityId id) const;

protected:
    template <class T>
    using Table = std::map<EntityId, T>;

    template <class T>
    const Table<T>& table() const;
    template <class T>
    Table<T>& table();

    Table<Category> categories_;
    Table<Problem> problems_;
    Table<Approach> approaches_;
    Table<Machine> machines_;
    Table<Environment> environments_;
    Table<Configuration> configurations_;
    std::map<EntityId, ResultRecord> results_;
    std::uint64_t next_id_ = 1;

    friend class Store;
};

/// Exclusive write access. Every put validates references and unique keys before it
/// changes anything, and writes the entity document through to disk when the store is attached.
class StoreWriter : public StoreView {
public:
    EntityId put(Category e);
    EntityId put(Problem e);
    EntityId put(Approach e);
    EntityId put(Machine e);
    EntityId put(Environment e);
    EntityId put(Configuration e);
    void put_result(ResultRecord r);

private:
    template <class T>
    EntityId commit(T e);
    void write_document(const std::filesystem::path& rel, const nlohmann::json& doc) const;

    std::optional<std::filesystem::path> root_;
    friend class Store;
};

struct LoadResult;

/// The benchmark archive. Many concurrent readers, one writer at a time.
class Store {
public:
    Store();
    ~Store();
    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    /// Loads the archive rooted at `root` (creating it if missing) and keeps writing through to it.
    static std::unique_ptr<Store> open(const std::filesystem::path& root, std::vector<CorruptRecord>* corrupt = nullptr);

    template <class F>
    decltype(auto) read(F&& f) const {
        std::shared_lock lock(mutex_);
        return f(static_cast<const StoreView&>(state_));
    }

    template <class F>
    decltype(auto) write(F&& f) {
        std::unique_lock lock(mutex_);
        return f(state_);
    }

    template <class T>
    EntityId put(T e) {
        return write([&](StoreWriter& w) { return w.put(std::move(e)); });
    }
    void put_result(ResultRecord r) {
        write([&](StoreWriter& w) { w.put_result(std::move(r)); });
    }
    template <class T>
    T get(EntityId id) const {
        return read([&](const StoreView& v) { return v.get<T>(id); });
    }
    template <class T>
    std::vector<T> list() const {
        return read([](const StoreView& v) { return v.list<T>(); });
    }

    OptionSet list_options(const FilterSelection& partial, const AccessContext& viewer) const {
        return read([&](const StoreView& v) { return v.list_options(partial, viewer); });
    }
    std::vector<QueryRow> query(const FilterSelection& selection, const AccessContext& viewer,
                                const DataScope& scope = {}) const {
        return read([&](const StoreView& v) { return v.query(selection, viewer, scope); });
    }

    /// Writes a full snapshot into `root`, which must be missing or empty.
    void persist(const std::filesystem::path& root) const;
    static LoadResult load(const std::filesystem::path& root);

    const std::optional<std::filesystem::path>& root() const { return state_.root_; }

private:
    mutable std::shared_mutex mutex_;
    StoreWriter state_;
};

struct LoadResult {
    std::unique_ptr<Store> store;
    std::vector<CorruptRecord> corrupt;
};

/// Archive directory holding documents of one entity kind.
std::string_view directory_of(EntityKind kind);

}  // namespace scalelab
