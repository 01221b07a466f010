#ifndef LITERALE_EVAL_HPP
#define LITERALE_EVAL_HPP

#include <thread>
#include <unordered_set>

#include "literale/model.hpp"
#include "literale/reciprocal.hpp"

namespace literale {

/// Rank of the true entity among non-filtered candidates: 1 + number of
/// strictly better scores + half the exact ties (rounded down).
inline std::size_t rank_of(std::size_t true_entity, const Vec& scores,
                           const std::unordered_set<std::size_t>& filter) {
    const double s_true = scores[true_entity];
    std::size_t greater = 0, ties = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (i == true_entity || filter.count(i)) continue;
        if (scores[i] > s_true) ++greater;
        else if (scores[i] == s_true) ++ties;
    }
    return 1 + greater + ties / 2;
}

struct DirectionReport {
    double mr = 0.0;
    double mrr = 0.0;
    double hits1 = 0.0, hits3 = 0.0, hits10 = 0.0;
};

struct RankingReport {
    DirectionReport head;     // head-corruption
    DirectionReport tail;     // tail-corruption
    DirectionReport overall;  // mean over both directions
    std::size_t n_test = 0;
    bool filtered = true;
};

namespace detail {
inline DirectionReport aggregate(const std::vector<std::size_t>& ranks) {
    DirectionReport r;
    if (ranks.empty()) return r;
    for (std::size_t rank : ranks) {
        r.mr += static_cast<double>(rank);
        r.mrr += 1.0 / static_cast<double>(rank);
        r.hits1 += rank <= 1;
        r.hits3 += rank <= 3;
        r.hits10 += rank <= 10;
    }
    const double n = static_cast<double>(ranks.size());
    r.mr /= n;
    r.mrr /= n;
    r.hits1 /= n;
    r.hits3 /= n;
    r.hits10 /= n;
    return r;
}
}  // namespace detail

/// Filtered (or raw) ranking over one split: each triple is ranked under
/// tail corruption via (h, r, ?) and head corruption via (t, r^-1, ?).
inline RankingReport evaluate(const EnrichedModel& model, const ReciprocalView& view,
                              const std::vector<IdTriple>& split, bool filtered = true,
                              std::size_t n_threads = 1) {
    if (split.empty()) throw ConfigError("evaluate: empty split");
    const std::size_t n = split.size();
    std::vector<std::size_t> tail_ranks(n), head_ranks(n);

    const EnrichedModel::BatchContext batch = model.begin_batch(false);
    auto worker = [&](std::size_t begin, std::size_t end) {
        std::mt19937_64 rng(0);  // eval mode draws nothing
        EnrichedModel::PairCache cache;
        for (std::size_t i = begin; i < end; ++i) {
            const IdTriple& t = split[i];
            std::unordered_set<std::size_t> filter;
            Vec scores = model.forward(batch, t.head, t.relation, rng, cache);
            if (filtered)
                if (const auto* known = view.known({t.head, t.relation}))
                    filter.insert(known->begin(), known->end());
            filter.erase(t.tail);
            tail_ranks[i] = rank_of(t.tail, scores, filter);

            const std::size_t rev = view.reverse(t.relation);
            filter.clear();
            scores = model.forward(batch, t.tail, rev, rng, cache);
            if (filtered)
                if (const auto* known = view.known({t.tail, rev}))
                    filter.insert(known->begin(), known->end());
            filter.erase(t.head);
            head_ranks[i] = rank_of(t.head, scores, filter);
        }
    };

    n_threads = std::max<std::size_t>(1, std::min(n_threads, n));
    if (n_threads == 1) {
        worker(0, n);
    } else {
        std::vector<std::thread> threads;
        const std::size_t chunk = (n + n_threads - 1) / n_threads;
        for (std::size_t t = 0; t < n_threads; ++t)
            threads.emplace_back(worker, t * chunk, std::min(n, (t + 1) * chunk));
        for (auto& th : threads) th.join();
    }

    RankingReport report;
    report.n_test = n;
    report.filtered = filtered;
    report.tail = detail::aggregate(tail_ranks);
    report.head = detail::aggregate(head_ranks);
    std::vector<std::size_t> all;
    all.reserve(2 * n);
    all.insert(all.end(), tail_ranks.begin(), tail_ranks.end());
    all.insert(all.end(), head_ranks.begin(), head_ranks.end());
    report.overall = detail::aggregate(all);
    return report;
}

}  // namespace literale

#endif
