#ifndef LITERALE_RECIPROCAL_HPP
#define LITERALE_RECIPROCAL_HPP

#include <algorithm>
#include <map>
#include <vector>

#include "literale/data.hpp"

namespace literale {

/// Training/evaluation view of a TripleStore with reciprocal relations:
/// every relation r gets a reverse r+N_r, so head prediction for (?, r, t)
/// becomes tail prediction for (t, r+N_r, ?). Scoring models are sized
/// with 2*N_r relation rows; reporting keeps the original N_r.
class ReciprocalView {
  public:
    using Key = std::pair<std::size_t, std::size_t>;  // (head, relation)

    std::size_t n_entities = 0;
    std::size_t n_base_relations = 0;
    std::map<Key, std::vector<std::size_t>> train_index;  // both directions, train split
    std::map<Key, std::vector<std::size_t>> known_index;  // both directions, all splits

    ReciprocalView() = default;

    ReciprocalView(const TripleStore& store, const Vocabulary& vocab)
        : n_entities(vocab.entities.size()), n_base_relations(vocab.relations.size()) {
        std::map<Key, std::set<std::size_t>> train_sets, known_sets;
        for (const IdTriple& t : store.train) {
            train_sets[{t.head, t.relation}].insert(t.tail);
            train_sets[{t.tail, reverse(t.relation)}].insert(t.head);
        }
        for (const IdTriple& t : store.all_known) {
            known_sets[{t.head, t.relation}].insert(t.tail);
            known_sets[{t.tail, reverse(t.relation)}].insert(t.head);
        }
        for (auto& [k, s] : train_sets)
            train_index.emplace(k, std::vector<std::size_t>(s.begin(), s.end()));
        for (auto& [k, s] : known_sets)
            known_index.emplace(k, std::vector<std::size_t>(s.begin(), s.end()));
    }

    std::size_t n_relations() const { return 2 * n_base_relations; }
    std::size_t reverse(std::size_t r) const { return r + n_base_relations; }

    /// Binary 1-N target vector for one training key.
    Vec targets(const Key& key) const {
        auto it = train_index.find(key);
        if (it == train_index.end())
            throw LookupError("no training tails for (head=" + std::to_string(key.first) +
                              ", relation=" + std::to_string(key.second) + ")");
        Vec y(n_entities, 0.0);
        for (std::size_t t : it->second) y[t] = 1.0;
        return y;
    }

    const std::vector<std::size_t>* known(const Key& key) const {
        auto it = known_index.find(key);
        return it == known_index.end() ? nullptr : &it->second;
    }

    std::vector<Key> train_keys() const {
        std::vector<Key> keys;
        keys.reserve(train_index.size());
        for (const auto& [k, _] : train_index) keys.push_back(k);
        return keys;
    }
};

}  // namespace literale

#endif
