#ifndef LITERALE_TRAIN_HPP
#define LITERALE_TRAIN_HPP

#include <cmath>

#include "literale/eval.hpp"
#include "literale/loss.hpp"

namespace literale {

struct TrainConfig {
    double learning_rate = 0.001;
    std::size_t batch_size = 128;
    std::size_t max_epochs = 100;
    double label_smoothing = 0.1;
    std::size_t eval_every = 3;
    std::size_t patience = 5;
    std::uint64_t seed = 0;
    std::size_t eval_threads = 1;

    void validate() const {
        if (learning_rate < 0.0) throw ConfigError("learning rate must be >= 0");
        if (batch_size < 1) throw ConfigError("batch size must be >= 1");
        if (eval_every < 1) throw ConfigError("eval_every must be >= 1");
        if (label_smoothing < 0.0 || label_smoothing >= 1.0)
            throw ConfigError("label smoothing must be in [0,1)");
    }

    AdamConfig adam() const {
        AdamConfig a;
        a.learning_rate = learning_rate;
        return a;
    }
};

/// One pass over all distinct (head, relation) training keys with 1-N
/// scoring. Returns the mean per-key loss.
inline double train_epoch(EnrichedModel& model, const ReciprocalView& view,
                          const TrainConfig& cfg, std::mt19937_64& rng) {
    cfg.validate();
    std::vector<ReciprocalView::Key> keys = view.train_keys();
    std::shuffle(keys.begin(), keys.end(), rng);

    const AdamConfig adam = cfg.adam();
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < keys.size(); start += cfg.batch_size) {
        const std::size_t end = std::min(keys.size(), start + cfg.batch_size);
        const double inv_batch = 1.0 / static_cast<double>(end - start);
        auto batch = model.begin_batch(true);
        for (std::size_t i = start; i < end; ++i) {
            const auto& key = keys[i];
            const Vec y = smooth_labels(view.targets(key), cfg.label_smoothing, view.n_entities);
            EnrichedModel::PairCache cache;
            const Vec scores = model.forward(batch, key.first, key.second, rng, cache);
            LossResult lr = bce_loss(scores, y);
            loss_sum += lr.loss;
            for (double& g : lr.dscores) g *= inv_batch;
            model.backward(batch, cache, lr.dscores);
        }
        model.end_batch(batch);
        if (cfg.learning_rate > 0.0) adam_step(model.store, adam);
        model.store.zero_grads();
    }
    return loss_sum / static_cast<double>(keys.size());
}

/// Tracks the best validation metric and counts consecutive
/// non-improving evaluations.
class EarlyStopper {
  public:
    explicit EarlyStopper(std::size_t patience) : patience_(patience) {}

    /// Feed one evaluation result; returns true if this is a new best.
    bool observe(double metric) {
        if (!any_ || metric > best_) {
            any_ = true;
            best_ = metric;
            ++n_observed_;
            best_index_ = n_observed_;
            bad_ = 0;
            return true;
        }
        ++n_observed_;
        ++bad_;
        return false;
    }

    bool should_stop() const { return bad_ >= patience_; }
    double best() const { return best_; }
    std::size_t best_index() const { return best_index_; }  // 1-based evaluation index

  private:
    std::size_t patience_;
    double best_ = 0.0;
    bool any_ = false;
    std::size_t bad_ = 0;
    std::size_t n_observed_ = 0;
    std::size_t best_index_ = 0;
};

struct TrainLogEntry {
    std::size_t epoch = 0;
    double loss = 0.0;
    double val_mrr = std::nan("");  // NaN when this epoch was not evaluated
};

struct FitResult {
    ParameterStore best_params;
    double best_val_mrr = 0.0;
    std::size_t best_epoch = 0;
    std::vector<TrainLogEntry> log;
};

/// Full training run with periodic filtered validation MRR and early
/// stopping after `patience` consecutive non-improving evaluations. The
/// best checkpoint (by validation MRR) is returned.
inline FitResult fit(EnrichedModel& model, const ReciprocalView& view,
                     const std::vector<IdTriple>& valid_split, const TrainConfig& cfg) {
    cfg.validate();
    if (valid_split.empty()) throw ConfigError("fit: empty validation split");
    std::mt19937_64 rng(cfg.seed);
    FitResult result;
    result.best_params = model.store;
    EarlyStopper stopper(cfg.patience);
    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        TrainLogEntry entry;
        entry.epoch = epoch;
        entry.loss = train_epoch(model, view, cfg, rng);
        if (epoch % cfg.eval_every == 0) {
            const RankingReport rep =
                evaluate(model, view, valid_split, true, cfg.eval_threads);
            entry.val_mrr = rep.overall.mrr;
            if (stopper.observe(rep.overall.mrr)) {
                result.best_val_mrr = rep.overall.mrr;
                result.best_epoch = epoch;
                result.best_params = model.store;
            }
        }
        result.log.push_back(entry);
        if (stopper.should_stop()) break;
    }
    return result;
}

}  // namespace literale

#endif
