// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on
// any failure. Uses only the library plus the shared test helpers.
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>

#include "helpers.hpp"

using namespace literale;

namespace {

const std::vector<FusionKind> kAllFusions = {
    FusionKind::None,       FusionKind::Linear, FusionKind::NonlinearTanh,
    FusionKind::NonlinearReLU, FusionKind::MLP,  FusionKind::Gate,
};
const std::vector<ModelKind> kAllModels = {ModelKind::DistMult, ModelKind::ComplEx,
                                           ModelKind::ConvE};

EnrichedModel make_toy_model(const Dataset& ds, const ReciprocalView& view, ModelKind mk,
                             FusionKind fk, std::uint64_t seed) {
    return EnrichedModel(testutil::small_model_config(mk, 8), {fk, 0},
                         ds.vocab.entities.size(), view.n_relations(), &ds.literals, seed);
}

// ---- criterion 1: gradient suite ---------------------------------------

bool gradient_suite(std::string& detail) {
    Dataset ds = testutil::toy_kg();
    const ReciprocalView view(ds.store, ds.vocab);
    const std::size_t ne = ds.vocab.entities.size();
    double worst = 0.0;
    for (ModelKind mk : kAllModels) {
        for (FusionKind fk : kAllFusions) {
            EnrichedModel m = make_toy_model(ds, view, mk, fk, 101);
            testutil::ModelLossProbe probe{&m, view.train_keys(), {}};
            probe.keys.resize(3);
            for (const auto& key : probe.keys)
                probe.targets.push_back(smooth_labels(view.targets(key), 0.1, ne));
            probe.backward();
            const double err =
                testutil::max_grad_rel_err(m.store, [&] { return probe.loss(); });
            worst = std::max(worst, err);
            if (err > 1e-4) {
                detail = to_string(mk) + "+" + to_string(fk) +
                         " max rel err " + std::to_string(err);
                return false;
            }
        }
    }
    detail = "max rel err " + std::to_string(worst) + " over 18 configurations";
    return true;
}

// ---- criterion 2: identity reduction -----------------------------------

Tensor identity_block(std::size_t h, std::size_t nd) {
    Tensor w({h + nd, h});
    for (std::size_t i = 0; i < h; ++i) w.at2(i, i) = 1.0;
    return w;
}

bool identity_reduction(std::string& detail) {
    Dataset ds = testutil::toy_kg();
    const ReciprocalView view(ds.store, ds.vocab);
    const std::size_t nd = ds.literals.n_data_relations();
    for (ModelKind mk : kAllModels) {
        EnrichedModel base = make_toy_model(ds, view, mk, FusionKind::None, 7);
        EnrichedModel fused = make_toy_model(ds, view, mk, FusionKind::Linear, 7);
        const Tensor w = identity_block(fused.dim(), nd);
        if (mk == ModelKind::ComplEx) {
            fused.store.values("fusion_w_re") = w;
            fused.store.values("fusion_w_im") = w;
        } else {
            fused.store.values("fusion_w") = w;
        }
        for (const IdTriple& t : ds.store.train)
            if (fused.score_triple(t.head, t.relation, t.tail) !=
                base.score_triple(t.head, t.relation, t.tail)) {
                detail = to_string(mk) + ": enriched score differs from base";
                return false;
            }
        // parameter-count overhead of linear fusion: (H + Nd) * H, doubled
        // for ComplEx which fuses real and imaginary parts independently
        const std::size_t ne = ds.vocab.entities.size(), nr = view.n_relations();
        const std::size_t overhead =
            parameter_count(fused.model_cfg, FusionKind::Linear, ne, nr, nd, 0) -
            parameter_count(base.model_cfg, FusionKind::None, ne, nr, nd, 0);
        const std::size_t expected =
            (fused.dim() + nd) * fused.dim() * (mk == ModelKind::ComplEx ? 2 : 1);
        if (overhead != expected) {
            detail = to_string(mk) + ": fusion overhead " + std::to_string(overhead) +
                     " != " + std::to_string(expected);
            return false;
        }
        if (fused.store.total_size() - base.store.total_size() != expected) {
            detail = to_string(mk) + ": store tally disagrees with the count formula";
            return false;
        }
    }
    detail = "bitwise reduction and exact overhead for all three models";
    return true;
}

// ---- criterion 3: ranking oracle ---------------------------------------

bool same_direction(const DirectionReport& a, const DirectionReport& b) {
    return a.mr == b.mr && a.mrr == b.mrr && a.hits1 == b.hits1 && a.hits3 == b.hits3 &&
           a.hits10 == b.hits10;
}

bool ranking_oracle(std::string& detail) {
    Dataset ds = testutil::toy_kg();
    const ReciprocalView view(ds.store, ds.vocab);
    EnrichedModel m = make_toy_model(ds, view, ModelKind::DistMult, FusionKind::Linear, 55);
    for (const auto* split : {&ds.store.valid, &ds.store.test})
        for (bool filtered : {false, true}) {
            const RankingReport fast = evaluate(m, view, *split, filtered);
            const RankingReport slow =
                testutil::brute_force_evaluate(m, view, *split, filtered);
            if (!same_direction(fast.head, slow.head) ||
                !same_direction(fast.tail, slow.tail) ||
                !same_direction(fast.overall, slow.overall)) {
                detail = std::string(filtered ? "filtered" : "raw") +
                         " metrics disagree with the brute-force oracle";
                return false;
            }
        }
    detail = "raw and filtered metrics equal the brute-force oracle on both splits";
    return true;
}

// ---- criterion 4: algebraic properties ---------------------------------

bool algebraic_properties(std::string& detail) {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    auto rand_vec = [&](std::size_t n) {
        Vec v(n);
        for (double& x : v) x = unif(rng);
        return v;
    };
    for (int i = 0; i < 1000; ++i) {
        const Vec a = rand_vec(8), b = rand_vec(8), r = rand_vec(8);
        if (score_distmult(a, b, r) != score_distmult(b, a, r)) {
            detail = "distmult symmetry violated";
            return false;
        }
    }
    for (int i = 0; i < 200; ++i) {
        const Vec a = rand_vec(6), b = rand_vec(6), r = rand_vec(6), zero(6, 0.0);
        if (std::abs(score_complex(a, zero, b, zero, r, zero) - score_distmult(a, b, r)) >
            1e-12) {
            detail = "complex with zero imaginary parts deviates from distmult";
            return false;
        }
    }
    bool witness = false;
    for (int i = 0; i < 100 && !witness; ++i) {
        const Vec ri = rand_vec(4), ii = rand_vec(4), rj = rand_vec(4), ij = rand_vec(4),
                  rr = rand_vec(4), ir = rand_vec(4);
        witness = std::abs(score_complex(ri, ii, rj, ij, rr, ir) -
                           score_complex(rj, ij, ri, ii, rr, ir)) > 1e-9;
    }
    if (!witness) {
        detail = "no complex asymmetry witness found";
        return false;
    }
    detail = "symmetry, reduction, and asymmetry witness all hold";
    return true;
}

// ---- criteria 5-6: synthetic benefit and seed stability ----------------

double synthetic_val_mrr(const Dataset& ds, const ReciprocalView& view, FusionKind fk,
                         std::uint64_t seed) {
    ModelConfig mc = testutil::small_model_config(ModelKind::DistMult, 32);
    EnrichedModel m(mc, {fk, 0}, ds.vocab.entities.size(), view.n_relations(),
                    &ds.literals, seed);
    TrainConfig cfg;
    cfg.learning_rate = 0.01;
    cfg.batch_size = 128;
    cfg.max_epochs = 200;
    cfg.eval_every = 5;
    cfg.patience = 10;
    cfg.seed = seed;
    cfg.eval_threads = 4;
    return fit(m, view, ds.store.valid, cfg).best_val_mrr;
}

bool synthetic_benefit(std::string& detail) {
    const SyntheticDataset syn = generate_synthetic(200, 4, 2024);
    Dataset ds = syn.to_dataset(true);
    const ReciprocalView view(ds.store, ds.vocab);
    double gap_sum = 0.0;
    for (std::uint64_t seed : {1, 2, 3}) {
        const double with_lit = synthetic_val_mrr(ds, view, FusionKind::Linear, seed);
        const double without = synthetic_val_mrr(ds, view, FusionKind::None, seed);
        gap_sum += with_lit - without;
    }
    const double mean_gap = gap_sum / 3.0;
    detail = "mean validation MRR gap " + std::to_string(mean_gap) + " (need >= 0.05)";
    return mean_gap >= 0.05;
}

bool seed_stability(std::string& detail) {
    const SyntheticDataset syn = generate_synthetic(200, 4, 2024);
    Dataset ds = syn.to_dataset(true);
    const ReciprocalView view(ds.store, ds.vocab);
    std::vector<double> mrrs;
    for (std::uint64_t seed : {11, 12, 13, 14, 15})
        mrrs.push_back(synthetic_val_mrr(ds, view, FusionKind::Linear, seed));
    const double mean = std::accumulate(mrrs.begin(), mrrs.end(), 0.0) / 5.0;
    double var = 0.0;
    for (double m : mrrs) var += (m - mean) * (m - mean);
    const double sd = std::sqrt(var / 5.0);
    detail = "MRR std over 5 seeds " + std::to_string(sd) + " (need <= 0.02)";
    return sd <= 0.02;
}

// ---- criterion 7: determinism ------------------------------------------

bool determinism(std::string& detail) {
    Dataset ds = testutil::toy_kg();
    const ReciprocalView view(ds.store, ds.vocab);
    auto run = [&](const std::string& ckpt) {
        EnrichedModel m = make_toy_model(ds, view, ModelKind::DistMult, FusionKind::Gate, 9);
        TrainConfig cfg;
        cfg.batch_size = 4;
        cfg.max_epochs = 10;
        cfg.eval_every = 2;
        cfg.seed = 9;
        const FitResult r = fit(m, view, ds.store.valid, cfg);
        save_checkpoint(r.best_params, ckpt);
        m.store = r.best_params;
        return evaluate(m, view, ds.store.test, true);
    };
    const std::string c1 = "acceptance_run1.ckpt", c2 = "acceptance_run2.ckpt";
    const RankingReport r1 = run(c1), r2 = run(c2);
    std::ifstream f1(c1, std::ios::binary), f2(c2, std::ios::binary);
    const std::string b1((std::istreambuf_iterator<char>(f1)), {});
    const std::string b2((std::istreambuf_iterator<char>(f2)), {});
    std::filesystem::remove(c1);
    std::filesystem::remove(c2);
    if (b1 != b2 || b1.empty()) {
        detail = "checkpoints differ between identical runs";
        return false;
    }
    if (!same_direction(r1.overall, r2.overall)) {
        detail = "reports differ between identical runs";
        return false;
    }
    detail = "identical config and seed give bitwise-equal checkpoints and reports";
    return true;
}

// ---- criterion 8: training sanity --------------------------------------

bool training_sanity(std::string& detail) {
    Dataset ds = testutil::toy_kg();
    const ReciprocalView view(ds.store, ds.vocab);
    for (ModelKind mk : kAllModels) {
        for (FusionKind fk : kAllFusions) {
            EnrichedModel m = make_toy_model(ds, view, mk, fk, 77);
            TrainConfig cfg;
            cfg.learning_rate = 0.05;
            cfg.batch_size = 2;
            cfg.label_smoothing = 0.0;  // hard targets so the loss can fall freely
            // ConvE's ReLU output composed with a nonnegative fusion keeps
            // every score >= 0, flooring the per-negative loss at ln2; these
            // two combinations need a much hotter first epoch to shed half
            // of its loss.
            if (mk == ModelKind::ConvE &&
                (fk == FusionKind::NonlinearReLU || fk == FusionKind::MLP)) {
                cfg.learning_rate = 0.5;
                cfg.batch_size = 1;
            }
            std::mt19937_64 rng(77);
            const double first = train_epoch(m, view, cfg, rng);
            double last = first;
            for (int epoch = 1; epoch < 50; ++epoch) last = train_epoch(m, view, cfg, rng);
            if (!(last < 0.5 * first)) {
                detail = to_string(mk) + "+" + to_string(fk) + ": epoch-50 loss " +
                         std::to_string(last) + " vs first " + std::to_string(first);
                return false;
            }
        }
    }
    detail = "epoch-50 loss under half the first epoch's loss for all 18 combinations";
    return true;
}

// ---- criterion 9: data layer at benchmark scale ------------------------

bool data_layer(std::string& detail) {
    const std::string dir =
        (std::filesystem::temp_directory_path() / "literale_acceptance_fb").string();
    std::filesystem::remove_all(dir);
    testutil::write_benchmark_shaped_dataset(dir);
    const Dataset ds = load_dataset(dir, 5, true);
    std::filesystem::remove_all(dir);
    const DatasetStats st = dataset_stats(ds.vocab, ds.store, ds.literals);
    auto expect = [&](const char* name, std::size_t got, std::size_t want) {
        if (got == want) return true;
        detail = std::string(name) + " = " + std::to_string(got) + ", expected " +
                 std::to_string(want);
        return false;
    };
    if (!expect("entities", st.n_entities, 14541)) return false;
    if (!expect("relations", st.n_relations, 237)) return false;
    if (!expect("data relations", st.n_data_relations, 121)) return false;
    if (!expect("relational triples", st.n_relational_triples, 310116)) return false;
    if (!expect("train", ds.store.train.size(), 272115)) return false;
    if (!expect("valid", ds.store.valid.size(), 17535)) return false;
    if (!expect("test", ds.store.test.size(), 20466)) return false;
    if (!expect("literal triples", st.n_literal_triples, 70257)) return false;
    detail = "benchmark-scale ingestion reproduces every documented count";
    return true;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<bool(std::string&)> fn;
    };
    const std::vector<Criterion> criteria = {
        {1, "gradient-suite", gradient_suite},
        {2, "identity-reduction", identity_reduction},
        {3, "ranking-oracle", ranking_oracle},
        {4, "algebraic-properties", algebraic_properties},
        {5, "synthetic-literal-benefit", synthetic_benefit},
        {6, "seed-stability", seed_stability},
        {7, "determinism", determinism},
        {8, "training-sanity", training_sanity},
        {9, "data-layer", data_layer},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", c.id, c.name, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures ? 1 : 0;
}
