#include <ctime>
// JSON-backed factor hint files and the factorization cache.
//
// Hint file schema: an object mapping decimal integer strings to arrays of
// [prime-string, exponent] pairs.  Cache files use the same layout with an
// optional per-entry {"factors": ..., "method": ..., "time": ...} wrapper.
// Every entry is validated (multiplication + primality) before use.
#pragma once

#include <pnpair/factorization.hpp>

#include <json.hpp>

#include <fstream>
#include <string>

namespace pnpair {

class JsonHintStore final : public FactorHintStore {
  public:
    JsonHintStore() = default;

    static JsonHintStore load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw error("cannot open hint file: " + path);
        nlohmann::json j;
        in >> j;
        JsonHintStore store;
        store.merge_json(j, path);
        return store;
    }

    void merge_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw error("cannot open hint file: " + path);
        nlohmann::json j;
        in >> j;
        merge_json(j, path);
    }

    bool lookup(const Int& n, std::map<Int, unsigned>& out) const override {
        auto it = entries_.find(n);
        if (it == entries_.end()) return false;
        ++hits_;
        for (const auto& [p, e] : it->second.factors) out[p] += e;
        return true;
    }

    bool contains(const Int& n) const { return entries_.count(n) != 0; }
    std::size_t size() const { return entries_.size(); }
    std::size_t hits() const { return hits_; }

    // Record a complete factorization (cache path).  Partial results are
    // not cacheable.
    void add(const FactoredInteger& f, const std::string& method = "computed") {
        if (!f.complete()) throw error("JsonHintStore::add: refusing incomplete factorization");
        if (entries_.count(f.value())) return;
        Entry e;
        e.factors = f.factors();
        e.method = method;
        e.time = std::time(nullptr);
        entries_.emplace(f.value(), std::move(e));
        dirty_ = true;
    }

    bool dirty() const { return dirty_; }

    void save_file(const std::string& path) const {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [n, e] : entries_) {
            nlohmann::json fs = nlohmann::json::array();
            for (const auto& [p, k] : e.factors) fs.push_back({p.str(), k});
            if (e.method.empty()) {
                j[n.str()] = fs;
            } else {
                j[n.str()] = {{"factors", fs}, {"method", e.method}, {"time", e.time}};
            }
        }
        std::ofstream out(path);
        if (!out) throw error("cannot write hint file: " + path);
        out << j.dump() << '\n';
        dirty_ = false;
    }

  private:
    struct Entry {
        std::vector<std::pair<Int, unsigned>> factors;
        std::string method; // empty for plain hint entries
        std::time_t time = 0;
    };

    void merge_json(const nlohmann::json& j, const std::string& origin) {
        if (!j.is_object()) throw error("hint file is not a JSON object: " + origin);
        for (auto it = j.begin(); it != j.end(); ++it) {
            Int n(it.key());
            Entry e;
            const nlohmann::json* fs = &it.value();
            if (it.value().is_object()) {
                e.method = it.value().value("method", "");
                e.time = it.value().value("time", std::time_t(0));
                fs = &it.value().at("factors");
            }
            Int prod = 1;
            for (const auto& pe : *fs) {
                Int p(pe.at(0).get<std::string>());
                unsigned k = pe.at(1).get<unsigned>();
                if (k < 1 || !is_prime(p))
                    throw error("hint entry for " + it.key() + " lists a non-prime: " + p.str());
                prod *= ipow(p, k);
                e.factors.emplace_back(p, k);
            }
            if (prod != n)
                throw error("hint entry for " + it.key() + " does not multiply back");
            std::sort(e.factors.begin(), e.factors.end());
            entries_.emplace(std::move(n), std::move(e));
        }
    }

    std::map<Int, Entry> entries_;
    mutable std::size_t hits_ = 0;
    mutable bool dirty_ = false;
};

} // namespace pnpair
