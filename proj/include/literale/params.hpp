#ifndef LITERALE_PARAMS_HPP
#define LITERALE_PARAMS_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "literale/tensor.hpp"

namespace literale {

struct AdamConfig {
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    void validate() const {
        if (learning_rate <= 0.0) throw ConfigError("learning_rate must be > 0");
        if (beta1 <= 0.0 || beta1 >= 1.0 || beta2 <= 0.0 || beta2 >= 1.0)
            throw ConfigError("adam betas must lie in (0,1)");
        if (epsilon <= 0.0) throw ConfigError("adam epsilon must be > 0");
    }
};

/// Named dense parameter entries, each carrying a gradient buffer and
/// Adam first/second moment buffers of the same shape.
class ParameterStore {
  public:
    struct Entry {
        std::string name;
        Tensor values;
        Tensor grad;
        Tensor adam_m;
        Tensor adam_v;
    };

    std::int64_t step_count = 0;

    Tensor& add(const std::string& name, std::vector<std::size_t> shape) {
        for (std::size_t d : shape)
            if (d == 0) throw ConfigError("parameter '" + name + "' has a zero dimension");
        if (index_.count(name)) throw ConfigError("duplicate parameter '" + name + "'");
        index_[name] = entries_.size();
        Entry e;
        e.name = name;
        e.values = Tensor(shape);
        e.grad = Tensor(shape);
        e.adam_m = Tensor(shape);
        e.adam_v = Tensor(std::move(shape));
        entries_.push_back(std::move(e));
        return entries_.back().values;
    }

    bool has(const std::string& name) const { return index_.count(name) != 0; }

    Entry& entry(const std::string& name) {
        auto it = index_.find(name);
        if (it == index_.end()) throw LookupError("unknown parameter '" + name + "'");
        return entries_[it->second];
    }
    const Entry& entry(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw LookupError("unknown parameter '" + name + "'");
        return entries_[it->second];
    }

    Tensor& values(const std::string& name) { return entry(name).values; }
    const Tensor& values(const std::string& name) const { return entry(name).values; }
    Tensor& grad(const std::string& name) { return entry(name).grad; }

    std::vector<Entry>& entries() { return entries_; }
    const std::vector<Entry>& entries() const { return entries_; }

    std::size_t total_size() const {
        std::size_t n = 0;
        for (const auto& e : entries_) n += e.values.size();
        return n;
    }

    void zero_grads() {
        for (auto& e : entries_) e.grad.fill(0.0);
    }

  private:
    std::vector<Entry> entries_;
    std::map<std::string, std::size_t> index_;
};

/// Standard Adam with bias correction over every entry.
inline void adam_step(ParameterStore& store, const AdamConfig& cfg) {
    cfg.validate();
    store.step_count += 1;
    const double t = static_cast<double>(store.step_count);
    const double bc1 = 1.0 - std::pow(cfg.beta1, t);
    const double bc2 = 1.0 - std::pow(cfg.beta2, t);
    for (auto& e : store.entries()) {
        for (std::size_t i = 0; i < e.values.size(); ++i) {
            const double g = e.grad.data[i];
            double& m = e.adam_m.data[i];
            double& v = e.adam_v.data[i];
            m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
            v = cfg.beta2 * v + (1.0 - cfg.beta2) * g * g;
            const double mhat = m / bc1;
            const double vhat = v / bc2;
            e.values.data[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
        }
    }
}

/// Seeded Glorot-uniform fill: bound sqrt(6/(fan_in+fan_out)).
inline void glorot_fill(Tensor& t, std::mt19937_64& rng) {
    double fan_in, fan_out;
    if (t.shape.size() == 3) {  // conv filters (F, fh, fw)
        fan_in = static_cast<double>(t.shape[1] * t.shape[2]);
        fan_out = static_cast<double>(t.shape[0]);
    } else if (t.shape.size() >= 2) {
        fan_out = static_cast<double>(t.shape.back());
        fan_in = static_cast<double>(t.size()) / fan_out;
    } else {
        fan_in = fan_out = static_cast<double>(t.size());
    }
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> unif(-bound, bound);
    for (double& v : t.data) v = unif(rng);
}

inline ParameterStore init_parameters(
    const std::vector<std::pair<std::string, std::vector<std::size_t>>>& shapes,
    std::uint64_t seed) {
    ParameterStore store;
    std::mt19937_64 rng(seed);
    for (const auto& [name, shape] : shapes) {
        Tensor& t = store.add(name, shape);
        glorot_fill(t, rng);
    }
    return store;
}

// ---- checkpoint io -----------------------------------------------------
// magic, u32 version, i64 step_count, u64 entry count, then per entry:
// u32 name length, name bytes, u32 rank, u64 dims, then values / adam_m /
// adam_v as row-major 64-bit little-endian floats.

namespace detail {
constexpr char kCheckpointMagic[4] = {'L', 'E', 'K', 'G'};
constexpr std::uint32_t kCheckpointVersion = 1;

template <typename T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
void read_pod(std::istream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
}
}  // namespace detail

inline void save_checkpoint(const ParameterStore& store, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open checkpoint for writing: " + path);
    os.write(detail::kCheckpointMagic, 4);
    detail::write_pod(os, detail::kCheckpointVersion);
    detail::write_pod(os, store.step_count);
    detail::write_pod(os, static_cast<std::uint64_t>(store.entries().size()));
    for (const auto& e : store.entries()) {
        detail::write_pod(os, static_cast<std::uint32_t>(e.name.size()));
        os.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
        detail::write_pod(os, static_cast<std::uint32_t>(e.values.shape.size()));
        for (std::size_t d : e.values.shape)
            detail::write_pod(os, static_cast<std::uint64_t>(d));
        for (const Tensor* t : {&e.values, &e.adam_m, &e.adam_v})
            os.write(reinterpret_cast<const char*>(t->data.data()),
                     static_cast<std::streamsize>(t->data.size() * sizeof(double)));
    }
    if (!os) throw IoError("short write to checkpoint: " + path);
}

inline ParameterStore load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open checkpoint: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::string(magic, 4) != std::string(detail::kCheckpointMagic, 4))
        throw IoError("not a checkpoint file: " + path);
    std::uint32_t version = 0;
    detail::read_pod(is, version);
    if (version != detail::kCheckpointVersion)
        throw IoError("unsupported checkpoint version " + std::to_string(version));
    ParameterStore store;
    detail::read_pod(is, store.step_count);
    std::uint64_t n_entries = 0;
    detail::read_pod(is, n_entries);
    for (std::uint64_t i = 0; i < n_entries; ++i) {
        std::uint32_t name_len = 0;
        detail::read_pod(is, name_len);
        std::string name(name_len, '\0');
        is.read(name.data(), name_len);
        std::uint32_t rank = 0;
        detail::read_pod(is, rank);
        std::vector<std::size_t> shape(rank);
        for (auto& d : shape) {
            std::uint64_t v = 0;
            detail::read_pod(is, v);
            d = static_cast<std::size_t>(v);
        }
        store.add(name, shape);
        auto& e = store.entry(name);
        for (Tensor* t : {&e.values, &e.adam_m, &e.adam_v})
            is.read(reinterpret_cast<char*>(t->data.data()),
                    static_cast<std::streamsize>(t->data.size() * sizeof(double)));
        if (!is) throw IoError("truncated checkpoint: " + path);
    }
    return store;
}

}  // namespace literale

#endif
