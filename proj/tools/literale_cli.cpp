// Command-line front end: training, ranking evaluation, nearest-neighbor
// inspection, synthetic dataset generation, and dataset statistics.

#include <filesystem>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "literale/literale.hpp"

namespace {

using namespace literale;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;   // bad flags / malformed config
constexpr int kExitIo = 3;      // missing or malformed files
constexpr int kExitDim = 4;     // dimension inconsistencies
constexpr int kExitLookup = 5;  // unknown entities / parameters
constexpr int kExitOther = 1;

struct CliOptions {
    std::string dataset;
    std::string model = "distmult";
    std::string fusion = "linear";
    std::size_t dim = 100;
    double lr = 0.001;
    std::size_t batch_size = 128;
    std::size_t epochs = 0;  // 0 = per-model default
    double label_smoothing = 0.1;
    std::uint64_t seed = 0;
    std::size_t seeds = 1;
    std::string checkpoint;
    std::string out;
    bool raw = false;
    std::size_t k = 10;
    std::size_t threads = 1;
    std::size_t eval_every = 3;
    std::size_t patience = 5;
    std::size_t min_literal_frequency = 1;
    bool no_normalize = false;
    std::size_t mlp_hidden = 0;
    std::size_t reshape_width = 10;
    std::size_t n_filters = 32;
    double dropout_embedding = 0.2;
    double dropout_feature_map = 0.2;
    double dropout_projection = 0.3;

    std::string entity;  // neighbors
    std::string space = "enriched";
    std::size_t gen_entities = 200;  // generate
    std::size_t gen_clusters = 4;

    ModelConfig model_config() const {
        ModelConfig mc;
        mc.kind = model_kind_from_string(model);
        mc.dim = dim;
        mc.n_filters = n_filters;
        mc.reshape_width = reshape_width;
        mc.dropout_embedding = dropout_embedding;
        mc.dropout_feature_map = dropout_feature_map;
        mc.dropout_projection = dropout_projection;
        mc.validate();
        return mc;
    }

    FusionConfig fusion_config() const {
        FusionConfig fc;
        fc.kind = fusion_kind_from_string(fusion);
        fc.hidden = mlp_hidden;
        return fc;
    }

    std::size_t effective_epochs() const {
        if (epochs > 0) return epochs;
        if (model == "conve") return 1000;
        if (fusion == "gate") return 500;
        return 100;
    }

    TrainConfig train_config() const {
        TrainConfig tc;
        tc.learning_rate = lr;
        tc.batch_size = batch_size;
        tc.max_epochs = effective_epochs();
        tc.label_smoothing = label_smoothing;
        tc.eval_every = eval_every;
        tc.patience = patience;
        tc.seed = seed;
        tc.eval_threads = threads;
        tc.validate();
        return tc;
    }
};

Dataset load(const CliOptions& opt) {
    if (opt.dataset.empty()) throw ConfigError("--dataset is required for this command");
    return load_dataset(opt.dataset, opt.min_literal_frequency, !opt.no_normalize);
}

EnrichedModel build_model(const CliOptions& opt, const Dataset& ds, std::uint64_t seed) {
    const ReciprocalView view(ds.store, ds.vocab);
    return EnrichedModel(opt.model_config(), opt.fusion_config(), ds.vocab.entities.size(),
                         view.n_relations(), &ds.literals, seed);
}

void load_into(EnrichedModel& model, const std::string& path) {
    ParameterStore loaded = load_checkpoint(path);
    for (auto& e : model.store.entries()) {
        const auto& src = loaded.entry(e.name);
        if (src.values.shape != e.values.shape)
            throw DimensionError("checkpoint entry '" + e.name + "' has shape " +
                                 src.values.shape_str() + ", expected " +
                                 e.values.shape_str());
    }
    model.store = std::move(loaded);
}

void write_report(std::ostream& os, const RankingReport& r) {
    auto line = [&](const char* name, const DirectionReport& d) {
        os << std::left << std::setw(8) << name << std::right << std::fixed
           << std::setprecision(2) << std::setw(10) << d.mr << std::setprecision(4)
           << std::setw(10) << d.mrr << std::setw(10) << d.hits1 << std::setw(10) << d.hits3
           << std::setw(10) << d.hits10 << '\n';
    };
    os << std::left << std::setw(8) << "" << std::right << std::setw(10) << "mr"
       << std::setw(10) << "mrr" << std::setw(10) << "hits1" << std::setw(10) << "hits3"
       << std::setw(10) << "hits10" << '\n';
    line("head", r.head);
    line("tail", r.tail);
    line("overall", r.overall);
}

void write_report_kv(const std::string& path, const RankingReport& r) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write report: " + path);
    os.precision(17);
    auto dump = [&](const std::string& prefix, const DirectionReport& d) {
        os << prefix << "mr=" << d.mr << '\n'
           << prefix << "mrr=" << d.mrr << '\n'
           << prefix << "hits1=" << d.hits1 << '\n'
           << prefix << "hits3=" << d.hits3 << '\n'
           << prefix << "hits10=" << d.hits10 << '\n';
    };
    dump("head.", r.head);
    dump("tail.", r.tail);
    dump("", r.overall);
    os << "n_test=" << r.n_test << '\n';
    os << "filtered=" << (r.filtered ? 1 : 0) << '\n';
}

void write_train_log(const std::string& path, const std::vector<TrainLogEntry>& log) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write training log: " + path);
    os.precision(17);
    os << "epoch\tloss\tval_mrr\n";
    for (const auto& e : log) {
        os << e.epoch << '\t' << e.loss << '\t';
        if (std::isnan(e.val_mrr)) os << "-";
        else os << e.val_mrr;
        os << '\n';
    }
}

int cmd_train(const CliOptions& opt, const std::string& effective_config) {
    Dataset ds = load(opt);
    const ReciprocalView view(ds.store, ds.vocab);
    const TrainConfig tc = opt.train_config();
    const std::string ckpt =
        opt.checkpoint.empty() ? "model.ckpt" : opt.checkpoint;

    std::vector<double> seed_mrrs;
    for (std::size_t i = 0; i < opt.seeds; ++i) {
        const std::uint64_t seed = opt.seed + i;
        TrainConfig tc_i = tc;
        tc_i.seed = seed;
        EnrichedModel model(opt.model_config(), opt.fusion_config(),
                            ds.vocab.entities.size(), view.n_relations(), &ds.literals,
                            seed);
        FitResult fr = fit(model, view, ds.store.valid, tc_i);
        const std::string suffix = opt.seeds > 1 ? ".seed" + std::to_string(seed) : "";
        save_checkpoint(fr.best_params, ckpt + suffix);
        if (!opt.out.empty()) write_train_log(opt.out + suffix, fr.log);
        std::ofstream cfg_os(ckpt + suffix + ".config");
        cfg_os << effective_config;
        seed_mrrs.push_back(fr.best_val_mrr);
        std::cout << "seed=" << seed << " best_epoch=" << fr.best_epoch
                  << " best_val_mrr=" << std::fixed << std::setprecision(4)
                  << fr.best_val_mrr << '\n';
    }
    if (opt.seeds > 1) {
        double mean = 0.0;
        for (double m : seed_mrrs) mean += m;
        mean /= static_cast<double>(seed_mrrs.size());
        double var = 0.0;
        for (double m : seed_mrrs) var += (m - mean) * (m - mean);
        var /= static_cast<double>(seed_mrrs.size());
        std::cout << "val_mrr mean=" << std::fixed << std::setprecision(4) << mean
                  << " std=" << std::sqrt(var) << " over " << opt.seeds << " seeds\n";
    }
    return kExitOk;
}

int cmd_evaluate(const CliOptions& opt) {
    Dataset ds = load(opt);
    const ReciprocalView view(ds.store, ds.vocab);
    EnrichedModel model = build_model(opt, ds, 0);
    if (opt.checkpoint.empty()) throw ConfigError("--checkpoint is required for evaluate");
    load_into(model, opt.checkpoint);
    const RankingReport rep = evaluate(model, view, ds.store.test, !opt.raw, opt.threads);
    write_report(std::cout, rep);
    if (!opt.out.empty()) write_report_kv(opt.out, rep);
    return kExitOk;
}

int cmd_neighbors(const CliOptions& opt) {
    Dataset ds = load(opt);
    const ReciprocalView view(ds.store, ds.vocab);
    EnrichedModel model = build_model(opt, ds, 0);
    if (!opt.checkpoint.empty()) load_into(model, opt.checkpoint);
    const std::size_t entity = ds.vocab.entities.id(opt.entity);
    const auto space = neighbor_space_from_string(opt.space);
    const auto neighbors = nearest_neighbors(entity, space, opt.k, model, ds.literals);
    std::ostringstream table;
    table << std::left << std::setw(32) << "entity" << std::right << std::setw(12)
          << "similarity" << '\n';
    for (const auto& nb : neighbors)
        table << std::left << std::setw(32) << ds.vocab.entities.name(nb.entity)
              << std::right << std::fixed << std::setprecision(4) << std::setw(12)
              << nb.similarity << '\n';
    std::cout << table.str();
    if (!opt.out.empty()) {
        std::ofstream os(opt.out);
        if (!os) throw IoError("cannot write " + opt.out);
        os << table.str();
    }
    return kExitOk;
}

int cmd_generate(const CliOptions& opt) {
    if (opt.out.empty()) throw ConfigError("--out directory is required for generate");
    std::filesystem::create_directories(opt.out);
    const SyntheticDataset syn =
        generate_synthetic(opt.gen_entities, opt.gen_clusters, opt.seed);
    syn.write(opt.out);
    std::cout << "wrote " << syn.train.size() << " train / " << syn.valid.size()
              << " valid / " << syn.test.size() << " test triples and "
              << syn.literal_triples.size() << " literals to " << opt.out << '\n';
    return kExitOk;
}

int cmd_stats(const CliOptions& opt) {
    Dataset ds = load(opt);
    const DatasetStats st = dataset_stats(ds.vocab, ds.store, ds.literals);
    std::ostringstream os;
    os << "entities\t" << st.n_entities << '\n'
       << "relations\t" << st.n_relations << '\n'
       << "data_relations\t" << st.n_data_relations << '\n'
       << "relational_triples\t" << st.n_relational_triples << '\n'
       << "literal_triples\t" << st.n_literal_triples << '\n';
    std::cout << os.str();
    if (!opt.out.empty()) {
        std::ofstream f(opt.out);
        if (!f) throw IoError("cannot write " + opt.out);
        f << os.str();
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Knowledge-graph embedding link prediction with literal fusion"};
    app.require_subcommand(1);
    app.set_config("--config")->configurable(false);

    CliOptions opt;
    app.add_option("--dataset", opt.dataset, "Dataset directory (train/valid/test TSV)");
    app.add_option("--model", opt.model, "distmult|complex|conve")->capture_default_str();
    app.add_option("--fusion", opt.fusion, "none|linear|tanh|relu|mlp|gate")
        ->capture_default_str();
    app.add_option("--dim", opt.dim, "Embedding dimension H")->capture_default_str();
    app.add_option("--lr", opt.lr, "Learning rate")->capture_default_str();
    app.add_option("--batch-size", opt.batch_size)->capture_default_str();
    app.add_option("--epochs", opt.epochs, "Max epochs (0 = per-model default)")
        ->capture_default_str();
    app.add_option("--label-smoothing", opt.label_smoothing)->capture_default_str();
    app.add_option("--seed", opt.seed)->capture_default_str();
    app.add_option("--seeds", opt.seeds, "Number of seeds (outer loop)")
        ->capture_default_str();
    app.add_option("--checkpoint", opt.checkpoint, "Checkpoint path");
    app.add_option("--out", opt.out, "Output path (log/report/table/dataset dir)");
    app.add_flag("--raw,!--filtered", opt.raw, "Raw instead of filtered ranking");
    app.add_option("--k", opt.k, "Neighbor count")->capture_default_str();
    app.add_option("--threads", opt.threads, "Evaluation parallelism")
        ->capture_default_str();
    app.add_option("--eval-every", opt.eval_every)->capture_default_str();
    app.add_option("--patience", opt.patience)->capture_default_str();
    app.add_option("--min-literal-frequency", opt.min_literal_frequency)
        ->capture_default_str();
    app.add_flag("--no-normalize-literals", opt.no_normalize,
                 "Keep raw literal values (default: per-column min-max to [0,1])");
    app.add_option("--mlp-hidden", opt.mlp_hidden, "MLP fusion hidden width Z (0 = H)")
        ->capture_default_str();
    app.add_option("--reshape-width", opt.reshape_width, "ConvE reshape width")
        ->capture_default_str();
    app.add_option("--n-filters", opt.n_filters, "ConvE filter count")
        ->capture_default_str();
    app.add_option("--dropout-embedding", opt.dropout_embedding)->capture_default_str();
    app.add_option("--dropout-feature-map", opt.dropout_feature_map)
        ->capture_default_str();
    app.add_option("--dropout-projection", opt.dropout_projection)
        ->capture_default_str();

    // global options may appear after the subcommand name
    auto* train_cmd = app.add_subcommand("train", "Train a model")->fallthrough();
    auto* eval_cmd = app.add_subcommand("evaluate", "Rank a test split")->fallthrough();
    auto* nn_cmd =
        app.add_subcommand("neighbors", "Nearest neighbors of an entity")->fallthrough();
    nn_cmd->add_option("--entity", opt.entity, "Query entity")->required();
    nn_cmd->add_option("--space", opt.space, "embedding|literal|enriched")
        ->capture_default_str();
    auto* gen_cmd = app.add_subcommand("generate", "Generate a synthetic dataset")->fallthrough();
    gen_cmd->add_option("--entities", opt.gen_entities)->capture_default_str();
    gen_cmd->add_option("--clusters", opt.gen_clusters)->capture_default_str();
    auto* stats_cmd = app.add_subcommand("stats", "Dataset statistics")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*train_cmd) return cmd_train(opt, app.config_to_str(true, false));
        if (*eval_cmd) return cmd_evaluate(opt);
        if (*nn_cmd) return cmd_neighbors(opt);
        if (*gen_cmd) return cmd_generate(opt);
        if (*stats_cmd) return cmd_stats(opt);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDim;
    } catch (const LookupError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitLookup;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitOther;
    }
    return kExitUsage;
}
