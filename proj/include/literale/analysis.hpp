#ifndef LITERALE_ANALYSIS_HPP
#define LITERALE_ANALYSIS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <tuple>

#include "literale/model.hpp"

namespace literale {

/// Cosine similarity; defined as 0 whenever either vector is zero.
inline double cosine_similarity(const Vec& a, const Vec& b) {
    require_same_length(a, b, "cosine_similarity");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

enum class NeighborSpace { Embedding, Literal, Enriched };

inline NeighborSpace neighbor_space_from_string(const std::string& s) {
    if (s == "embedding") return NeighborSpace::Embedding;
    if (s == "literal") return NeighborSpace::Literal;
    if (s == "enriched") return NeighborSpace::Enriched;
    throw ConfigError("unknown space '" + s + "' (expected embedding|literal|enriched)");
}

struct Neighbor {
    std::size_t entity;
    double similarity;
};

/// Top-k entities by cosine similarity to the query entity in the chosen
/// space, the query itself excluded. Ties resolved by entity id.
inline std::vector<Neighbor> nearest_neighbors(std::size_t entity, NeighborSpace space,
                                               std::size_t k, const EnrichedModel& model,
                                               const LiteralMatrix& literals) {
    const std::size_t n = model.n_entities;
    if (entity >= n) throw LookupError("entity id out of range");
    if (k >= n) throw ConfigError("k must be smaller than the number of entities");
    auto vector_of = [&](std::size_t i) -> Vec {
        switch (space) {
            case NeighborSpace::Embedding: return model.base_embedding(i);
            case NeighborSpace::Literal: return literals.row(i);
            case NeighborSpace::Enriched: return model.enriched_embedding(i);
        }
        return {};
    };
    const Vec q = vector_of(entity);
    std::vector<Neighbor> all;
    all.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == entity) continue;
        all.push_back({i, cosine_similarity(q, vector_of(i))});
    }
    std::stable_sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.entity < b.entity;
    });
    all.resize(k);
    return all;
}

// ---- synthetic literal-dependent dataset -------------------------------

/// A generated link-prediction instance where literal values carry signal
/// that graph structure alone cannot provide. Person entities fall into
/// clusters; each person studies at its cluster's institution and sits at
/// an angle near the cluster's center on a circle, published as two
/// numeric attributes (the cosine and sine of the angle). A "knows" edge
/// exists iff two persons share an institution AND their angular distance
/// is below a tight threshold. The resulting graph is sparse, so among
/// same-school pairs only the literals decide.
struct SyntheticDataset {
    std::vector<std::array<std::string, 3>> train, valid, test;
    std::vector<std::tuple<std::string, std::string, double>> literal_triples;
    std::size_t n_clusters = 0;
    double threshold = 0.0;
    std::vector<std::size_t> person_cluster;  // cluster of person i
    std::vector<double> person_value;         // angle of person i

    void write(const std::string& dir) const {
        auto dump = [&](const std::string& name,
                        const std::vector<std::array<std::string, 3>>& triples) {
            std::ofstream os(dir + "/" + name);
            if (!os) throw IoError("cannot write " + dir + "/" + name);
            for (const auto& t : triples) os << t[0] << '\t' << t[1] << '\t' << t[2] << '\n';
        };
        dump("train.txt", train);
        dump("valid.txt", valid);
        dump("test.txt", test);
        std::ofstream os(dir + "/numerical_literals.txt");
        if (!os) throw IoError("cannot write " + dir + "/numerical_literals.txt");
        os.precision(17);
        for (const auto& [e, d, v] : literal_triples)
            os << e << '\t' << d << '\t' << v << '\n';
    }

    Dataset to_dataset(bool normalize = true) const {
        Dataset ds;
        auto intern = [&](const std::vector<std::array<std::string, 3>>& triples) {
            std::vector<IdTriple> out;
            out.reserve(triples.size());
            for (const auto& t : triples)
                out.push_back({ds.vocab.entities.intern(t[0]), ds.vocab.relations.intern(t[1]),
                               ds.vocab.entities.intern(t[2])});
            return out;
        };
        auto tr = intern(train);
        auto va = intern(valid);
        auto te = intern(test);
        ds.store = TripleStore(std::move(tr), std::move(va), std::move(te), ds.vocab);
        std::vector<RawLiteral> raw;
        raw.reserve(literal_triples.size());
        for (const auto& [e, d, v] : literal_triples)
            raw.push_back({ds.vocab.entities.id(e), d, v});
        ds.literals = build_literal_matrix(raw, ds.vocab, 1, normalize);
        return ds;
    }
};

inline SyntheticDataset generate_synthetic(std::size_t n_entities, std::size_t n_clusters,
                                           std::uint64_t seed) {
    if (n_clusters == 0 || n_entities < 4 * n_clusters)
        throw ConfigError("generate_synthetic: need n_entities >= 4 * n_clusters");
    SyntheticDataset out;
    out.n_clusters = n_clusters;
    // angular half-spread per cluster is 0.5, so the edge threshold keeps
    // edges sparse and leaves plenty of same-cluster non-edges
    out.threshold = 0.1;
    const double spread = 0.5;
    const double pi = std::acos(-1.0);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-spread, spread);

    out.person_cluster.resize(n_entities);
    out.person_value.resize(n_entities);
    for (std::size_t i = 0; i < n_entities; ++i) {
        const std::size_t c = i % n_clusters;
        out.person_cluster[i] = c;
        out.person_value[i] =
            2.0 * pi * static_cast<double>(c) / static_cast<double>(n_clusters) + unif(rng);
    }

    auto person = [](std::size_t i) { return "person_" + std::to_string(i); };
    auto school = [](std::size_t c) { return "school_" + std::to_string(c); };

    std::vector<std::array<std::string, 3>> backbone, knows;
    for (std::size_t i = 0; i < n_entities; ++i) {
        backbone.push_back({person(i), "studiesAt", school(out.person_cluster[i])});
        out.literal_triples.emplace_back(person(i), "attribute_x",
                                         std::cos(out.person_value[i]));
        out.literal_triples.emplace_back(person(i), "attribute_y",
                                         std::sin(out.person_value[i]));
    }
    for (std::size_t i = 0; i < n_entities; ++i)
        for (std::size_t j = i + 1; j < n_entities; ++j) {
            if (out.person_cluster[i] != out.person_cluster[j]) continue;
            if (std::abs(out.person_value[i] - out.person_value[j]) >= out.threshold) continue;
            knows.push_back({person(i), "knows", person(j)});
        }

    // 80/10/10 split of the knows edges; the structural backbone stays in
    // train so every entity is connected there.
    std::shuffle(knows.begin(), knows.end(), rng);
    const std::size_t n_valid = knows.size() / 10;
    const std::size_t n_test = knows.size() / 10;
    const std::size_t n_train = knows.size() - n_valid - n_test;
    if (n_valid == 0 || n_test == 0)
        throw ConfigError("generate_synthetic: instance too small to split");
    out.train = backbone;
    out.train.insert(out.train.end(), knows.begin(), knows.begin() + n_train);
    out.valid.assign(knows.begin() + n_train, knows.begin() + n_train + n_valid);
    out.test.assign(knows.begin() + n_train + n_valid, knows.end());
    return out;
}

}  // namespace literale

#endif
