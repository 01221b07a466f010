// Shared test utilities: finite-difference gradient oracle, toy fixtures,
// a brute-force ranking oracle, and a large deterministic dataset writer.
#ifndef LITERALE_TEST_HELPERS_HPP
#define LITERALE_TEST_HELPERS_HPP

#include <filesystem>
#include <functional>
#include <set>

#include "literale/literale.hpp"

namespace testutil {

using namespace literale;

// ---- finite differences ------------------------------------------------

/// Max relative error between the analytic gradients already stored in
/// `store.grad` and central finite differences of `fn`, over every
/// parameter entry. Error metric: |a - fd| / max(1, |fd|).
inline double max_grad_rel_err(ParameterStore& store, const std::function<double()>& fn,
                               double eps = 1e-5) {
    double worst = 0.0;
    for (auto& e : store.entries()) {
        for (std::size_t i = 0; i < e.values.size(); ++i) {
            double& theta = e.values.data[i];
            const double saved = theta;
            theta = saved + eps;
            const double fp = fn();
            theta = saved - eps;
            const double fm = fn();
            theta = saved;
            const double fd = (fp - fm) / (2.0 * eps);
            const double err = std::abs(e.grad.data[i] - fd) / std::max(1.0, std::abs(fd));
            worst = std::max(worst, err);
        }
    }
    return worst;
}

/// Same, over a single flat vector treated as the input of `fn`.
inline double max_vec_grad_rel_err(Vec& x, const Vec& analytic,
                                   const std::function<double()>& fn, double eps = 1e-5) {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double saved = x[i];
        x[i] = saved + eps;
        const double fp = fn();
        x[i] = saved - eps;
        const double fm = fn();
        x[i] = saved;
        const double fd = (fp - fm) / (2.0 * eps);
        worst = std::max(worst, std::abs(analytic[i] - fd) / std::max(1.0, std::abs(fd)));
    }
    return worst;
}

// ---- model-level loss closure -----------------------------------------

struct ModelLossProbe {
    EnrichedModel* model;
    std::vector<ReciprocalView::Key> keys;
    std::vector<Vec> targets;

    double loss() const {
        auto batch = model->begin_batch(true);
        std::mt19937_64 rng(0);
        double total = 0.0;
        EnrichedModel::PairCache cache;
        for (std::size_t i = 0; i < keys.size(); ++i) {
            const Vec scores =
                model->forward(batch, keys[i].first, keys[i].second, rng, cache);
            total += bce_loss(scores, targets[i]).loss;
        }
        return total;
    }

    /// Populates model->store gradients for the summed loss.
    void backward() const {
        model->store.zero_grads();
        auto batch = model->begin_batch(true);
        std::mt19937_64 rng(0);
        for (std::size_t i = 0; i < keys.size(); ++i) {
            EnrichedModel::PairCache cache;
            const Vec scores =
                model->forward(batch, keys[i].first, keys[i].second, rng, cache);
            LossResult lr = bce_loss(scores, targets[i]);
            model->backward(batch, cache, lr.dscores);
        }
        model->end_batch(batch);
    }
};

// ---- fixtures ----------------------------------------------------------

inline ModelConfig small_model_config(ModelKind kind, std::size_t dim) {
    ModelConfig mc;
    mc.kind = kind;
    mc.dim = dim;
    mc.n_filters = 2;
    mc.reshape_width = 4;  // H=8 -> each embedding reshapes to 2x4
    mc.dropout_embedding = 0.0;
    mc.dropout_feature_map = 0.0;
    mc.dropout_projection = 0.0;
    return mc;
}

/// 6 entities, 2 relations, 12 training triples plus small valid/test
/// splits. Entity a_i studies at one of two schools; knows-links follow
/// school membership.
inline Dataset toy_kg() {
    Dataset ds;
    auto tri = [&](const char* h, const char* r, const char* t) -> IdTriple {
        return {ds.vocab.entities.intern(h), ds.vocab.relations.intern(r),
                ds.vocab.entities.intern(t)};
    };
    std::vector<IdTriple> train = {
        tri("a0", "studiesAt", "s0"), tri("a1", "studiesAt", "s0"),
        tri("a2", "studiesAt", "s0"), tri("a3", "studiesAt", "s1"),
        tri("a0", "knows", "a1"),     tri("a1", "knows", "a2"),
        tri("a0", "knows", "a2"),     tri("a1", "knows", "a0"),
        tri("a2", "knows", "a0"),     tri("a3", "knows", "a3"),
        tri("a2", "knows", "a1"),     tri("a3", "studiesAt", "s0"),
    };
    std::vector<IdTriple> valid = {tri("a2", "knows", "a0"), tri("a1", "knows", "a2")};
    std::vector<IdTriple> test = {tri("a0", "knows", "a1"), tri("a3", "knows", "a3")};
    ds.store = TripleStore(std::move(train), std::move(valid), std::move(test), ds.vocab);
    // one literal per person, two data relations
    std::vector<RawLiteral> raw = {
        {ds.vocab.entities.id("a0"), "age", 20.0}, {ds.vocab.entities.id("a1"), "age", 21.0},
        {ds.vocab.entities.id("a2"), "age", 22.0}, {ds.vocab.entities.id("a3"), "age", 40.0},
        {ds.vocab.entities.id("a0"), "height", 170.0},
        {ds.vocab.entities.id("a3"), "height", 180.0},
    };
    ds.literals = build_literal_matrix(raw, ds.vocab, 1, true);
    return ds;
}

// ---- brute-force ranking oracle ---------------------------------------

/// Scores every corruption triple individually through score_triple,
/// sorts, and aggregates the metrics. Independent of the batched
/// evaluation path.
inline RankingReport brute_force_evaluate(const EnrichedModel& model,
                                          const ReciprocalView& view,
                                          const std::vector<IdTriple>& split,
                                          bool filtered) {
    auto rank_by_sort = [](double s_true, const std::vector<double>& others) {
        std::size_t greater = 0, ties = 0;
        for (double s : others) {
            if (s > s_true) ++greater;
            else if (s == s_true) ++ties;
        }
        return 1 + greater + ties / 2;
    };
    std::vector<std::size_t> tail_ranks, head_ranks;
    for (const IdTriple& t : split) {
        for (int dir = 0; dir < 2; ++dir) {
            const std::size_t query = dir == 0 ? t.head : t.tail;
            const std::size_t rel = dir == 0 ? t.relation : view.reverse(t.relation);
            const std::size_t truth = dir == 0 ? t.tail : t.head;
            std::set<std::size_t> filter;
            if (filtered)
                if (const auto* known = view.known({query, rel}))
                    filter.insert(known->begin(), known->end());
            filter.erase(truth);
            const double s_true = model.score_triple(query, rel, truth);
            std::vector<double> others;
            for (std::size_t x = 0; x < view.n_entities; ++x) {
                if (x == truth || filter.count(x)) continue;
                others.push_back(model.score_triple(query, rel, x));
            }
            (dir == 0 ? tail_ranks : head_ranks).push_back(rank_by_sort(s_true, others));
        }
    }
    RankingReport rep;
    rep.n_test = split.size();
    rep.filtered = filtered;
    rep.tail = literale::detail::aggregate(tail_ranks);
    rep.head = literale::detail::aggregate(head_ranks);
    std::vector<std::size_t> all(tail_ranks);
    all.insert(all.end(), head_ranks.begin(), head_ranks.end());
    rep.overall = literale::detail::aggregate(all);
    return rep;
}

// ---- large benchmark-shaped dataset -----------------------------------

/// Writes a deterministic dataset with the exact entity/relation/triple
/// counts of the FB15k-237 benchmark (14,541 entities, 237 relations,
/// 272,115/17,535/20,466 split, 121 surviving data relations, 70,257
/// literal triples). Used to exercise the data layer at benchmark scale.
inline void write_benchmark_shaped_dataset(const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    constexpr std::size_t kEntities = 14541;
    constexpr std::size_t kRelations = 237;
    constexpr std::size_t kTrain = 272115, kValid = 17535, kTest = 20466;
    constexpr std::size_t kLiteralPairs = 70257;
    constexpr std::size_t kDataRelations = 121;

    std::vector<IdTriple> triples;
    triples.reserve(kTrain + kValid + kTest);
    std::set<IdTriple> seen;
    // chain covering every entity and every relation
    for (std::size_t i = 0; i + 1 < kEntities; ++i) {
        IdTriple t{i, i % kRelations, i + 1};
        seen.insert(t);
        triples.push_back(t);
    }
    std::mt19937_64 rng(20240915);
    std::uniform_int_distribution<std::size_t> ent(0, kEntities - 1);
    std::uniform_int_distribution<std::size_t> rel(0, kRelations - 1);
    while (triples.size() < kTrain + kValid + kTest) {
        IdTriple t{ent(rng), rel(rng), ent(rng)};
        if (seen.insert(t).second) triples.push_back(t);
    }
    auto dump = [&](const char* name, std::size_t begin, std::size_t end) {
        std::ofstream os(dir + "/" + name);
        for (std::size_t i = begin; i < end; ++i)
            os << "e" << triples[i].head << "\tr" << triples[i].relation << "\te"
               << triples[i].tail << '\n';
    };
    dump("train.txt", 0, kTrain);
    dump("valid.txt", kTrain, kTrain + kValid);
    dump("test.txt", kTrain + kValid, kTrain + kValid + kTest);

    std::ofstream os(dir + "/numerical_literals.txt");
    std::size_t written = 0;
    for (std::size_t d = 0; d < kDataRelations; ++d) {
        const std::size_t count = kLiteralPairs / kDataRelations +
                                  (d < kLiteralPairs % kDataRelations ? 1 : 0);
        for (std::size_t j = 0; j < count; ++j) {
            const std::size_t e = (d * 37 + j * 13) % kEntities;  // 13 coprime to 14541
            os << "e" << e << "\td" << d << "\t" << (static_cast<double>((e * 7 + d) % 997) / 10.0)
               << '\n';
            ++written;
        }
    }
    // two data relations below the frequency-5 cutoff, plus a duplicate
    // pair for an entity that already has a value: all must be ignored
    for (std::size_t j = 0; j < 4; ++j) {
        os << "e" << j << "\td_rare_a\t" << 1.0 + static_cast<double>(j) << '\n';
        os << "e" << j << "\td_rare_b\t" << 2.0 + static_cast<double>(j) << '\n';
    }
    os << "e0\td0\t999.0\n";
    (void)written;
}

}  // namespace testutil

#endif
