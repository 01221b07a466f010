#ifndef LITERALE_MODEL_HPP
#define LITERALE_MODEL_HPP

#include <memory>

#include "literale/data.hpp"
#include "literale/fusion.hpp"
#include "literale/params.hpp"

namespace literale {

/// A base scoring model (DistMult / ComplEx / ConvE) whose entity
/// embeddings are replaced by literal-enriched vectors g(e_i, l_i)
/// before scoring. Fusion weights are shared between the subject and
/// object positions; ComplEx keeps independent fusion weights for its
/// real and imaginary parts.
class EnrichedModel {
  public:
    ModelConfig model_cfg;
    FusionConfig fusion_cfg;
    std::size_t n_entities = 0;
    std::size_t n_relations = 0;  // scoring relations (doubled when reciprocals are used)
    ParameterStore store;
    const LiteralMatrix* literals = nullptr;

    EnrichedModel(ModelConfig mc, FusionConfig fc, std::size_t ne, std::size_t nr,
                  const LiteralMatrix* lit, std::uint64_t seed)
        : model_cfg(mc), fusion_cfg(fc), n_entities(ne), n_relations(nr), literals(lit) {
        model_cfg.validate();
        if (ne == 0 || nr == 0)
            throw ConfigError("model needs at least one entity and one relation");
        store = init_parameters(parameter_shapes(model_cfg, fusion_cfg, ne, nr, n_data()), seed);
    }

    std::size_t n_data() const { return literals ? literals->n_data_relations() : 0; }
    std::size_t dim() const { return model_cfg.dim; }

    static std::vector<std::pair<std::string, std::vector<std::size_t>>> parameter_shapes(
        const ModelConfig& mc, const FusionConfig& fc, std::size_t ne, std::size_t nr,
        std::size_t nd) {
        const std::size_t h = mc.dim;
        std::vector<std::pair<std::string, std::vector<std::size_t>>> shapes;
        auto add_fusion = [&](const std::string& suffix) {
            switch (fc.kind) {
                case FusionKind::None:
                    break;
                case FusionKind::MLP: {
                    const std::size_t z = fc.mlp_hidden(h);
                    shapes.push_back({"fusion_w1" + suffix, {h + nd, z}});
                    shapes.push_back({"fusion_w2" + suffix, {z, h}});
                    break;
                }
                default:
                    shapes.push_back({"fusion_w" + suffix, {h + nd, h}});
                    break;
            }
        };
        if (mc.kind == ModelKind::ComplEx) {
            shapes.push_back({"entity_re", {ne, h}});
            shapes.push_back({"entity_im", {ne, h}});
            shapes.push_back({"relation_re", {nr, h}});
            shapes.push_back({"relation_im", {nr, h}});
            add_fusion("_re");
            add_fusion("_im");
        } else {
            shapes.push_back({"entity", {ne, h}});
            shapes.push_back({"relation", {nr, h}});
            if (mc.kind == ModelKind::ConvE) {
                shapes.push_back({"conv_filters", {mc.n_filters, mc.filter_h, mc.filter_w}});
                shapes.push_back({"conv_proj", {mc.conv_flat(), h}});
            }
            add_fusion("");
        }
        return shapes;
    }

    // ---- fusion helpers ------------------------------------------------

    Vec literal_row(std::size_t entity) const {
        if (!literals || literals->n_data_relations() == 0) return {};
        return literals->row(entity);
    }

    FuseCache fuse_entity(const std::string& table, const std::string& suffix,
                          std::size_t entity) const {
        const Vec e = ops::lookup_row(store.values(table), entity);
        if (fusion_cfg.kind == FusionKind::None) {
            FuseCache c;
            c.out = e;
            return c;
        }
        const Vec l = literal_row(entity);
        if (fusion_cfg.kind == FusionKind::MLP)
            return fuse_forward(fusion_cfg.kind, e, l, store.values("fusion_w1" + suffix),
                                &store.values("fusion_w2" + suffix));
        return fuse_forward(fusion_cfg.kind, e, l, store.values("fusion_w" + suffix));
    }

    void fuse_entity_backward(const std::string& table, const std::string& suffix,
                              std::size_t entity, const FuseCache& cache, const Vec& dout) {
        Vec de(dim(), 0.0);
        if (fusion_cfg.kind == FusionKind::None) {
            de = dout;
        } else {
            const Vec e = ops::lookup_row(store.values(table), entity);
            if (fusion_cfg.kind == FusionKind::MLP) {
                fuse_backward(fusion_cfg.kind, cache, e, store.values("fusion_w1" + suffix),
                              &store.values("fusion_w2" + suffix), dout, de,
                              store.grad("fusion_w1" + suffix),
                              &store.grad("fusion_w2" + suffix));
            } else {
                fuse_backward(fusion_cfg.kind, cache, e, store.values("fusion_w" + suffix),
                              nullptr, dout, de, store.grad("fusion_w" + suffix));
            }
        }
        ops::lookup_row_backward(store.grad(table), entity, de);
    }

    // ---- candidate side: fused embeddings of every entity --------------

    struct FusedEntities {
        Tensor fused;  // n_entities x H
        std::vector<FuseCache> caches;  // empty when fusion is None
    };

    FusedEntities fuse_all(const std::string& table, const std::string& suffix) const {
        const std::size_t h = dim();
        FusedEntities out;
        out.fused = Tensor({n_entities, h});
        if (fusion_cfg.kind == FusionKind::None) {
            out.fused.data = store.values(table).data;
            return out;
        }
        out.caches.resize(n_entities);
        for (std::size_t i = 0; i < n_entities; ++i) {
            out.caches[i] = fuse_entity(table, suffix, i);
            std::copy(out.caches[i].out.begin(), out.caches[i].out.end(),
                      out.fused.data.begin() + i * h);
        }
        return out;
    }

    void fuse_all_backward(const std::string& table, const std::string& suffix,
                           const FusedEntities& fe, const Tensor& dfused) {
        const std::size_t h = dim();
        if (fusion_cfg.kind == FusionKind::None) {
            Tensor& dtable = store.grad(table);
            for (std::size_t i = 0; i < dfused.size(); ++i) dtable.data[i] += dfused.data[i];
            return;
        }
        for (std::size_t i = 0; i < n_entities; ++i) {
            Vec dout(dfused.data.begin() + i * h, dfused.data.begin() + (i + 1) * h);
            fuse_entity_backward(table, suffix, i, fe.caches[i], dout);
        }
    }

    // ---- batch-level 1-N scoring ---------------------------------------

    /// Candidate-side state shared by every (head, relation) pair in a
    /// minibatch. Candidate gradients are accumulated densely and pushed
    /// through the fusion once per batch in end_batch().
    struct BatchContext {
        bool train_mode = false;
        FusedEntities cand;      // DistMult / ConvE
        FusedEntities cand_re, cand_im;  // ComplEx
        Tensor dcand, dcand_re, dcand_im;
    };

    struct PairCache {
        std::size_t head = 0, rel = 0;
        FuseCache head_fuse, head_fuse_re, head_fuse_im;
        ops::DropoutMask mask_h, mask_r, mask_h_im, mask_r_im;
        Vec eh, rk, eh_im, rk_im;  // post-dropout head/relation vectors
        Vec q, q_re, q_im;
        ConvECache conve;
    };

    BatchContext begin_batch(bool train_mode) const {
        BatchContext b;
        b.train_mode = train_mode;
        if (model_cfg.kind == ModelKind::ComplEx) {
            b.cand_re = fuse_all("entity_re", "_re");
            b.cand_im = fuse_all("entity_im", "_im");
            b.dcand_re = Tensor(b.cand_re.fused.shape);
            b.dcand_im = Tensor(b.cand_im.fused.shape);
        } else {
            b.cand = fuse_all("entity", "");
            b.dcand = Tensor(b.cand.fused.shape);
        }
        return b;
    }

    /// Scores (head, rel, e') for every candidate entity e'.
    Vec forward(const BatchContext& batch, std::size_t head, std::size_t rel,
                std::mt19937_64& rng, PairCache& cache) const {
        if (head >= n_entities)
            throw LookupError("head id " + std::to_string(head) + " out of range");
        if (rel >= n_relations)
            throw LookupError("relation id " + std::to_string(rel) + " out of range");
        const bool train = batch.train_mode;
        const double p_emb = model_cfg.dropout_embedding;
        cache.head = head;
        cache.rel = rel;
        if (model_cfg.kind == ModelKind::ComplEx) {
            cache.head_fuse_re = fuse_entity("entity_re", "_re", head);
            cache.head_fuse_im = fuse_entity("entity_im", "_im", head);
            cache.mask_h = ops::make_dropout_mask(dim(), p_emb, train, rng);
            cache.mask_h_im = ops::make_dropout_mask(dim(), p_emb, train, rng);
            cache.mask_r = ops::make_dropout_mask(dim(), p_emb, train, rng);
            cache.mask_r_im = ops::make_dropout_mask(dim(), p_emb, train, rng);
            cache.eh = cache.mask_h.apply(cache.head_fuse_re.out);
            cache.eh_im = cache.mask_h_im.apply(cache.head_fuse_im.out);
            cache.rk = cache.mask_r.apply(ops::lookup_row(store.values("relation_re"), rel));
            cache.rk_im = cache.mask_r_im.apply(ops::lookup_row(store.values("relation_im"), rel));
            cache.q_re.assign(dim(), 0.0);
            cache.q_im.assign(dim(), 0.0);
            for (std::size_t h = 0; h < dim(); ++h) {
                cache.q_re[h] = cache.eh[h] * cache.rk[h] - cache.eh_im[h] * cache.rk_im[h];
                cache.q_im[h] = cache.eh_im[h] * cache.rk[h] + cache.eh[h] * cache.rk_im[h];
            }
            Vec scores = score_all_tails(batch.cand_re.fused, cache.q_re);
            const Vec scores_im = score_all_tails(batch.cand_im.fused, cache.q_im);
            for (std::size_t i = 0; i < scores.size(); ++i) scores[i] += scores_im[i];
            return scores;
        }
        cache.head_fuse = fuse_entity("entity", "", head);
        cache.mask_h = ops::make_dropout_mask(dim(), p_emb, train, rng);
        cache.mask_r = ops::make_dropout_mask(dim(), p_emb, train, rng);
        cache.eh = cache.mask_h.apply(cache.head_fuse.out);
        cache.rk = cache.mask_r.apply(ops::lookup_row(store.values("relation"), rel));
        if (model_cfg.kind == ModelKind::DistMult) {
            cache.q = ops::elementwise_mul(cache.eh, cache.rk);
            return score_all_tails(batch.cand.fused, cache.q);
        }
        // ConvE
        cache.conve = conve_hidden(model_cfg, store.values("conv_filters"),
                                   store.values("conv_proj"), cache.eh, cache.rk, train, rng);
        return score_all_tails(batch.cand.fused, cache.conve.hidden);
    }

    void backward(BatchContext& batch, const PairCache& cache, const Vec& dscores) {
        const std::size_t h = dim();
        if (model_cfg.kind == ModelKind::ComplEx) {
            Vec dq_re(h, 0.0), dq_im(h, 0.0);
            score_all_tails_backward(batch.cand_re.fused, cache.q_re, dscores,
                                     batch.dcand_re, dq_re);
            score_all_tails_backward(batch.cand_im.fused, cache.q_im, dscores,
                                     batch.dcand_im, dq_im);
            Vec deh(h, 0.0), deh_im(h, 0.0), drk(h, 0.0), drk_im(h, 0.0);
            for (std::size_t i = 0; i < h; ++i) {
                deh[i] = dq_re[i] * cache.rk[i] + dq_im[i] * cache.rk_im[i];
                deh_im[i] = -dq_re[i] * cache.rk_im[i] + dq_im[i] * cache.rk[i];
                drk[i] = dq_re[i] * cache.eh[i] + dq_im[i] * cache.eh_im[i];
                drk_im[i] = -dq_re[i] * cache.eh_im[i] + dq_im[i] * cache.eh[i];
            }
            Vec dfuse(h, 0.0), dfuse_im(h, 0.0), drel(h, 0.0), drel_im(h, 0.0);
            cache.mask_h.backward(deh, dfuse);
            cache.mask_h_im.backward(deh_im, dfuse_im);
            cache.mask_r.backward(drk, drel);
            cache.mask_r_im.backward(drk_im, drel_im);
            fuse_entity_backward("entity_re", "_re", cache.head, cache.head_fuse_re, dfuse);
            fuse_entity_backward("entity_im", "_im", cache.head, cache.head_fuse_im, dfuse_im);
            ops::lookup_row_backward(store.grad("relation_re"), cache.rel, drel);
            ops::lookup_row_backward(store.grad("relation_im"), cache.rel, drel_im);
            return;
        }
        Vec deh(h, 0.0), drk(h, 0.0);
        if (model_cfg.kind == ModelKind::DistMult) {
            Vec dq(h, 0.0);
            score_all_tails_backward(batch.cand.fused, cache.q, dscores, batch.dcand, dq);
            ops::elementwise_mul_backward(cache.eh, cache.rk, dq, deh, drk);
        } else {
            Vec dv(h, 0.0);
            score_all_tails_backward(batch.cand.fused, cache.conve.hidden, dscores,
                                     batch.dcand, dv);
            conve_hidden_backward(model_cfg, store.values("conv_filters"),
                                  store.values("conv_proj"), cache.conve, dv,
                                  store.grad("conv_filters"), store.grad("conv_proj"),
                                  deh, drk);
        }
        Vec dfuse(h, 0.0), drel(h, 0.0);
        cache.mask_h.backward(deh, dfuse);
        cache.mask_r.backward(drk, drel);
        fuse_entity_backward("entity", "", cache.head, cache.head_fuse, dfuse);
        ops::lookup_row_backward(store.grad("relation"), cache.rel, drel);
    }

    /// Pushes the accumulated candidate gradients through the fusion.
    void end_batch(BatchContext& batch) {
        if (model_cfg.kind == ModelKind::ComplEx) {
            fuse_all_backward("entity_re", "_re", batch.cand_re, batch.dcand_re);
            fuse_all_backward("entity_im", "_im", batch.cand_im, batch.dcand_im);
        } else {
            fuse_all_backward("entity", "", batch.cand, batch.dcand);
        }
    }

    // ---- per-triple evaluation-mode scoring ----------------------------

    /// Deterministic single-triple score, dropout off.
    double score_triple(std::size_t head, std::size_t rel, std::size_t tail) const {
        if (head >= n_entities || tail >= n_entities)
            throw LookupError("entity id out of range");
        if (rel >= n_relations) throw LookupError("relation id out of range");
        std::mt19937_64 rng(0);  // unused in eval mode
        if (model_cfg.kind == ModelKind::ComplEx) {
            const Vec re_i = fuse_entity("entity_re", "_re", head).out;
            const Vec im_i = fuse_entity("entity_im", "_im", head).out;
            const Vec re_j = fuse_entity("entity_re", "_re", tail).out;
            const Vec im_j = fuse_entity("entity_im", "_im", tail).out;
            return score_complex(re_i, im_i, re_j, im_j,
                                 ops::lookup_row(store.values("relation_re"), rel),
                                 ops::lookup_row(store.values("relation_im"), rel));
        }
        const Vec ei = fuse_entity("entity", "", head).out;
        const Vec ej = fuse_entity("entity", "", tail).out;
        const Vec rk = ops::lookup_row(store.values("relation"), rel);
        if (model_cfg.kind == ModelKind::DistMult) return score_distmult(ei, ej, rk);
        return score_conve(model_cfg, store.values("conv_filters"),
                           store.values("conv_proj"), ei, ej, rk, false, rng);
    }

    /// Evaluation-mode 1-N scores for one (head, relation) key.
    Vec score_all(std::size_t head, std::size_t rel) const {
        std::mt19937_64 rng(0);
        BatchContext b = begin_batch(false);
        PairCache cache;
        return forward(b, head, rel, rng, cache);
    }

    /// The literal-enriched embedding of one entity (eval mode). For
    /// ComplEx, real and imaginary parts are concatenated.
    Vec enriched_embedding(std::size_t entity) const {
        if (model_cfg.kind == ModelKind::ComplEx)
            return ops::concat(fuse_entity("entity_re", "_re", entity).out,
                               fuse_entity("entity_im", "_im", entity).out);
        return fuse_entity("entity", "", entity).out;
    }

    /// The raw (pre-fusion) embedding; ComplEx parts concatenated.
    Vec base_embedding(std::size_t entity) const {
        if (model_cfg.kind == ModelKind::ComplEx)
            return ops::concat(ops::lookup_row(store.values("entity_re"), entity),
                               ops::lookup_row(store.values("entity_im"), entity));
        return ops::lookup_row(store.values("entity"), entity);
    }
};

}  // namespace literale

#endif
