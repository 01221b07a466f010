#ifndef LITERALE_DATA_HPP
#define LITERALE_DATA_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "literale/tensor.hpp"

namespace literale {

/// Bidirectional symbol table. Ids are contiguous from 0, assigned in
/// first-seen order.
class SymbolTable {
  public:
    std::size_t intern(const std::string& name) {
        auto it = ids_.find(name);
        if (it != ids_.end()) return it->second;
        const std::size_t id = names_.size();
        ids_.emplace(name, id);
        names_.push_back(name);
        return id;
    }

    std::size_t id(const std::string& name) const {
        auto it = ids_.find(name);
        if (it == ids_.end()) throw LookupError("unknown symbol '" + name + "'");
        return it->second;
    }

    bool contains(const std::string& name) const { return ids_.count(name) != 0; }

    const std::string& name(std::size_t id) const {
        if (id >= names_.size())
            throw LookupError("symbol id " + std::to_string(id) + " out of range");
        return names_[id];
    }

    std::size_t size() const { return names_.size(); }

  private:
    std::unordered_map<std::string, std::size_t> ids_;
    std::vector<std::string> names_;
};

struct Vocabulary {
    SymbolTable entities;
    SymbolTable relations;
    SymbolTable data_relations;
};

struct IdTriple {
    std::size_t head, relation, tail;
    bool operator==(const IdTriple&) const = default;
    auto operator<=>(const IdTriple&) const = default;
};

/// One raw line of the literal file, entity already resolved against the
/// vocabulary. Data-relation ids are assigned later, after frequency
/// filtering.
struct RawLiteral {
    std::size_t entity;
    std::string data_relation;
    double value;
};

// ---- parsing -----------------------------------------------------------

namespace detail {
inline bool split3(const std::string& line, std::string out[3]) {
    std::size_t start = 0;
    int field = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == '\t') {
            if (field == 3) return false;
            out[field++] = line.substr(start, i - start);
            start = i + 1;
        }
    }
    return field == 3;
}
}  // namespace detail

/// Reads tab-separated (head, relation, tail) lines, interning unseen
/// symbols. Duplicates are returned as-is; TripleStore deduplicates.
inline std::vector<IdTriple> parse_triples(const std::string& path, Vocabulary& vocab) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open triple file: " + path);
    std::vector<IdTriple> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::string f[3];
        if (!detail::split3(line, f) || f[0].empty() || f[1].empty() || f[2].empty())
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": expected 3 tab-separated fields");
        out.push_back({vocab.entities.intern(f[0]), vocab.relations.intern(f[1]),
                       vocab.entities.intern(f[2])});
    }
    return out;
}

/// Reads tab-separated (entity, data_relation, numeric value) lines.
/// Referenced entities must already be in the vocabulary.
inline std::vector<RawLiteral> parse_literals(const std::string& path,
                                              const Vocabulary& vocab) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open literal file: " + path);
    std::vector<RawLiteral> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::string f[3];
        if (!detail::split3(line, f) || f[0].empty() || f[1].empty() || f[2].empty())
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": expected 3 tab-separated fields");
        if (!vocab.entities.contains(f[0]))
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": entity '" + f[0] + "' not present in relational triples");
        double value;
        try {
            std::size_t pos = 0;
            value = std::stod(f[2], &pos);
            if (pos != f[2].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": malformed numeric value '" + f[2] + "'");
        }
        if (!std::isfinite(value))
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": non-finite literal value for ('" + f[0] + "', '" + f[1] + "')");
        out.push_back({vocab.entities.id(f[0]), f[1], value});
    }
    return out;
}

// ---- triple store ------------------------------------------------------

class TripleStore {
  public:
    std::vector<IdTriple> train, valid, test;
    std::set<IdTriple> all_known;
    std::map<std::pair<std::size_t, std::size_t>, std::set<std::size_t>> hr_index;

    TripleStore() = default;

    TripleStore(std::vector<IdTriple> train_raw, std::vector<IdTriple> valid_raw,
                std::vector<IdTriple> test_raw, const Vocabulary& vocab) {
        train = dedup(std::move(train_raw));
        valid = dedup(std::move(valid_raw));
        test = dedup(std::move(test_raw));
        for (const auto* split : {&train, &valid, &test})
            for (const IdTriple& t : *split) {
                check_bounds(t, vocab);
                all_known.insert(t);
            }
        for (const IdTriple& t : train) hr_index[{t.head, t.relation}].insert(t.tail);
    }

    std::size_t n_triples() const { return train.size() + valid.size() + test.size(); }

  private:
    static std::vector<IdTriple> dedup(std::vector<IdTriple> v) {
        std::set<IdTriple> seen;
        std::vector<IdTriple> out;
        out.reserve(v.size());
        for (const IdTriple& t : v)
            if (seen.insert(t).second) out.push_back(t);
        return out;
    }

    static void check_bounds(const IdTriple& t, const Vocabulary& vocab) {
        if (t.head >= vocab.entities.size() || t.tail >= vocab.entities.size() ||
            t.relation >= vocab.relations.size())
            throw LookupError("triple id out of vocabulary bounds");
    }
};

/// Binary 1-N target vector over all entities for one (head, relation)
/// training key.
inline Vec one_to_n_targets(std::size_t head, std::size_t relation,
                            const TripleStore& store, std::size_t n_entities) {
    auto it = store.hr_index.find({head, relation});
    if (it == store.hr_index.end())
        throw LookupError("no training tails for (head=" + std::to_string(head) +
                          ", relation=" + std::to_string(relation) + ")");
    Vec y(n_entities, 0.0);
    for (std::size_t t : it->second) y[t] = 1.0;
    return y;
}

// ---- literal matrix ----------------------------------------------------

class LiteralMatrix {
  public:
    Tensor values;                                   // N_e x N_d
    std::vector<std::uint8_t> present;               // same layout
    std::vector<std::pair<double, double>> norm_params;  // per-column (min, max)
    bool normalized = false;

    LiteralMatrix() : values({0, 0}) {}
    LiteralMatrix(std::size_t n_entities, std::size_t n_data_relations)
        : values({n_entities, n_data_relations}),
          present(n_entities * n_data_relations, 0),
          norm_params(n_data_relations, {0.0, 0.0}) {}

    std::size_t n_entities() const { return values.rows(); }
    std::size_t n_data_relations() const { return values.shape.size() > 1 ? values.shape[1] : 0; }

    bool is_present(std::size_t e, std::size_t d) const {
        return present[e * n_data_relations() + d] != 0;
    }

    Vec row(std::size_t e) const {
        const std::size_t nd = n_data_relations();
        if (e >= n_entities()) throw LookupError("literal row " + std::to_string(e) + " out of range");
        return Vec(values.data.begin() + e * nd, values.data.begin() + (e + 1) * nd);
    }

    std::size_t n_present() const {
        std::size_t n = 0;
        for (auto p : present) n += p;
        return n;
    }
};

/// Frequency-filters data relations, assigns their ids (first-seen order
/// among survivors), keeps the first value per (entity, data relation)
/// pair, and optionally min-max normalizes each column to [0,1].
inline LiteralMatrix build_literal_matrix(const std::vector<RawLiteral>& raw,
                                          Vocabulary& vocab, std::size_t min_frequency,
                                          bool normalize) {
    std::unordered_map<std::string, std::size_t> freq;
    for (const RawLiteral& r : raw) ++freq[r.data_relation];
    for (const RawLiteral& r : raw)
        if (freq[r.data_relation] >= min_frequency) vocab.data_relations.intern(r.data_relation);

    const std::size_t ne = vocab.entities.size();
    const std::size_t nd = vocab.data_relations.size();
    LiteralMatrix lit(ne, nd);
    for (const RawLiteral& r : raw) {
        if (freq[r.data_relation] < min_frequency) continue;
        const std::size_t d = vocab.data_relations.id(r.data_relation);
        const std::size_t idx = r.entity * nd + d;
        if (lit.present[idx]) continue;  // first value in file order wins
        lit.present[idx] = 1;
        lit.values.data[idx] = r.value;
    }

    for (std::size_t d = 0; d < nd; ++d) {
        double lo = 0.0, hi = 0.0;
        bool any = false;
        for (std::size_t e = 0; e < ne; ++e) {
            if (!lit.present[e * nd + d]) continue;
            const double v = lit.values.data[e * nd + d];
            if (!any) { lo = hi = v; any = true; }
            else { lo = std::min(lo, v); hi = std::max(hi, v); }
        }
        lit.norm_params[d] = {lo, hi};
        if (normalize && any) {
            for (std::size_t e = 0; e < ne; ++e) {
                if (!lit.present[e * nd + d]) continue;
                double& v = lit.values.data[e * nd + d];
                v = hi > lo ? (v - lo) / (hi - lo) : 0.5;
            }
        }
    }
    lit.normalized = normalize;
    return lit;
}

// ---- dataset loading and stats ----------------------------------------

struct Dataset {
    Vocabulary vocab;
    TripleStore store;
    LiteralMatrix literals;
};

/// Loads train.txt / valid.txt / test.txt plus (optionally)
/// numerical_literals.txt from a dataset directory.
inline Dataset load_dataset(const std::string& dir, std::size_t min_frequency = 1,
                            bool normalize = true) {
    Dataset ds;
    auto train = parse_triples(dir + "/train.txt", ds.vocab);
    auto valid = parse_triples(dir + "/valid.txt", ds.vocab);
    auto test = parse_triples(dir + "/test.txt", ds.vocab);
    ds.store = TripleStore(std::move(train), std::move(valid), std::move(test), ds.vocab);
    const std::string lit_path = dir + "/numerical_literals.txt";
    if (std::ifstream probe(lit_path); probe) {
        auto raw = parse_literals(lit_path, ds.vocab);
        ds.literals = build_literal_matrix(raw, ds.vocab, min_frequency, normalize);
    } else {
        ds.literals = LiteralMatrix(ds.vocab.entities.size(), 0);
    }
    return ds;
}

struct DatasetStats {
    std::size_t n_entities = 0;
    std::size_t n_relations = 0;
    std::size_t n_data_relations = 0;
    std::size_t n_relational_triples = 0;
    std::size_t n_literal_triples = 0;
    bool operator==(const DatasetStats&) const = default;
};

inline DatasetStats dataset_stats(const Vocabulary& vocab, const TripleStore& store,
                                  const LiteralMatrix& lit) {
    return {vocab.entities.size(), vocab.relations.size(), vocab.data_relations.size(),
            store.n_triples(), lit.n_present()};
}

}  // namespace literale

#endif
