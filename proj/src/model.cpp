#include "ogo/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "ogo/rng.hpp"

namespace ogo {

EcocCodebook EcocCodebook::make(int q_count) {
    if (q_count < 2) throw std::invalid_argument("EcocCodebook: q_count must be >= 2");
    EcocCodebook cb;
    cb.q_count = q_count;
    cb.codes = Matrix(q_count, q_count - 1);
    for (int q = 0; q < q_count; ++q)
        for (int k = 0; k < q_count - 1; ++k) cb.codes(q, k) = (k < q) ? 1.0 : 0.0;
    return cb;
}

std::vector<double> ecoc_encode(int q, int q_count) {
    if (q_count < 2) throw std::invalid_argument("ecoc_encode: q_count must be >= 2");
    if (q < 0 || q >= q_count) throw std::invalid_argument("ecoc_encode: class index out of range");
    std::vector<double> code(q_count - 1, 0.0);
    for (int k = 0; k < q; ++k) code[k] = 1.0;
    return code;
}

int ecoc_decode(std::span<const double> outputs, const EcocCodebook& codebook) {
    if (static_cast<int>(outputs.size()) != codebook.q_count - 1)
        throw std::invalid_argument("ecoc_decode: output length must be Q-1");
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int q = 0; q < codebook.q_count; ++q) {
        double d = 0.0;
        for (int k = 0; k < codebook.q_count - 1; ++k) {
            const double diff = outputs[k] - codebook.codes(q, k);
            d += diff * diff;
        }
        if (d < best_d) { // strict: ties stay with the lower class index
            best_d = d;
            best = q;
        }
    }
    return best;
}

std::vector<double> cumulative_to_probs(std::span<const double> outputs) {
    if (outputs.empty()) throw std::invalid_argument("cumulative_to_probs: empty outputs");
    const int q_count = static_cast<int>(outputs.size()) + 1;
    std::vector<double> probs(q_count);
    probs[0] = 1.0 - outputs[0];
    for (int q = 1; q < q_count - 1; ++q) probs[q] = outputs[q - 1] - outputs[q];
    probs[q_count - 1] = outputs[q_count - 2];
    return probs;
}

LossGrad cross_entropy_loss(std::span<const double> probs, int y) {
    if (y < 0 || y >= static_cast<int>(probs.size()))
        throw std::invalid_argument("cross_entropy_loss: class index out of range");
    double sum = 0.0;
    for (double p : probs) {
        if (p < 0.0) throw std::invalid_argument("cross_entropy_loss: negative probability");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("cross_entropy_loss: probabilities do not sum to 1");

    LossGrad lg;
    double py = probs[y];
    if (py < 1e-12) {
        py = 1e-12;
        lg.clamped = true;
    }
    lg.loss = -std::log(py);
    lg.grad.assign(probs.begin(), probs.end());
    lg.grad[y] -= 1.0;
    return lg;
}

LossGrad mse_ecoc_loss(std::span<const double> outputs, int y, int q_count) {
    if (static_cast<int>(outputs.size()) != q_count - 1)
        throw std::invalid_argument("mse_ecoc_loss: output length must be Q-1");
    const std::vector<double> target = ecoc_encode(y, q_count);
    LossGrad lg;
    lg.grad.resize(outputs.size());
    const double scale = 1.0 / (q_count - 1);
    for (std::size_t k = 0; k < outputs.size(); ++k) {
        const double diff = target[k] - outputs[k];
        lg.loss += diff * diff * scale;
        // d/ds of (t - sigmoid(s))^2 / (Q-1), evaluated at o = sigmoid(s).
        lg.grad[k] = 2.0 * (outputs[k] - target[k]) * outputs[k] * (1.0 - outputs[k]) * scale;
    }
    return lg;
}

const char* head_kind_name(HeadKind k) {
    return k == HeadKind::nominal ? "nominal" : "ordinal";
}

HeadKind head_kind_from_name(std::string_view name) {
    if (name == "nominal") return HeadKind::nominal;
    if (name == "ordinal") return HeadKind::ordinal;
    throw std::invalid_argument("unknown head kind '" + std::string(name) + "'");
}

FeedforwardNet::FeedforwardNet(HeadKind head, int input_dim, int hidden_dim, int q_count,
                               double lrelu_slope)
    : head_(head), input_dim_(input_dim), hidden_dim_(hidden_dim), q_count_(q_count),
      slope_(lrelu_slope) {
    if (input_dim < 1 || hidden_dim < 1) throw std::invalid_argument("net: bad dimensions");
    if (q_count < 2) throw std::invalid_argument("net: q_count must be >= 2");
    if (!(lrelu_slope > 0.0 && lrelu_slope < 1.0))
        throw std::invalid_argument("net: LReLU slope must be in (0, 1)");
    std::size_t count = encoder_param_count();
    if (head_ == HeadKind::nominal) {
        count += static_cast<std::size_t>(q_count_) * hidden_dim_ + q_count_;
    } else {
        group_dim_ = std::max(1, hidden_dim_ / (q_count_ - 1));
        count += static_cast<std::size_t>(q_count_ - 1) *
                 (static_cast<std::size_t>(group_dim_) * hidden_dim_ + 2 * group_dim_ + 1);
    }
    params_.assign(count, 0.0);
}

std::size_t FeedforwardNet::encoder_param_count() const {
    return static_cast<std::size_t>(hidden_dim_) * input_dim_ + hidden_dim_;
}

void FeedforwardNet::encode(std::span<const double> x, std::span<double> hidden_out) const {
    const double* w = params_.data();
    const double* b = params_.data() + static_cast<std::size_t>(hidden_dim_) * input_dim_;
    for (int h = 0; h < hidden_dim_; ++h) {
        double a = b[h];
        const double* row = w + static_cast<std::size_t>(h) * input_dim_;
        for (int i = 0; i < input_dim_; ++i) a += row[i] * x[i];
        hidden_out[h] = a > 0.0 ? a : slope_ * a;
    }
}

void FeedforwardNet::head_forward(std::span<const double> h, std::span<double> out) const {
    const double* p = params_.data() + encoder_param_count();
    if (head_ == HeadKind::nominal) {
        const double* w = p;
        const double* b = p + static_cast<std::size_t>(q_count_) * hidden_dim_;
        std::vector<double> z(q_count_);
        double zmax = -std::numeric_limits<double>::infinity();
        for (int c = 0; c < q_count_; ++c) {
            double v = b[c];
            const double* row = w + static_cast<std::size_t>(c) * hidden_dim_;
            for (int i = 0; i < hidden_dim_; ++i) v += row[i] * h[i];
            z[c] = v;
            zmax = std::max(zmax, v);
        }
        double sum = 0.0;
        for (int c = 0; c < q_count_; ++c) {
            out[c] = std::exp(z[c] - zmax);
            sum += out[c];
        }
        for (int c = 0; c < q_count_; ++c) out[c] /= sum;
    } else {
        const int m = group_dim_;
        const std::size_t block = static_cast<std::size_t>(m) * hidden_dim_ + 2 * m + 1;
        for (int k = 0; k < q_count_ - 1; ++k) {
            const double* v = p + static_cast<std::size_t>(k) * block;
            const double* c = v + static_cast<std::size_t>(m) * hidden_dim_;
            const double* wk = c + m;
            double s = wk[m]; // output bias
            for (int g = 0; g < m; ++g) {
                double u = c[g];
                const double* row = v + static_cast<std::size_t>(g) * hidden_dim_;
                for (int i = 0; i < hidden_dim_; ++i) u += row[i] * h[i];
                const double gact = u > 0.0 ? u : slope_ * u;
                s += wk[g] * gact;
            }
            out[k] = 1.0 / (1.0 + std::exp(-s));
        }
    }
}

std::vector<double> FeedforwardNet::forward(std::span<const double> x) const {
    std::vector<double> h(hidden_dim_);
    encode(x, h);
    std::vector<double> out(output_dim());
    head_forward(h, out);
    return out;
}

namespace {

void fill_uniform(std::span<double> dst, double bound, Rng& rng) {
    for (double& v : dst) v = (2.0 * rng.u01() - 1.0) * bound;
}

void init_head(FeedforwardNet& net, Rng& rng) {
    auto params = net.params();
    const std::size_t enc = net.encoder_param_count();
    const double head_bound = 1.0 / std::sqrt(static_cast<double>(net.hidden_dim()));
    if (net.head_kind() == HeadKind::nominal) {
        fill_uniform(params.subspan(enc), head_bound, rng);
    } else {
        const int m = net.group_dim();
        const std::size_t mh = static_cast<std::size_t>(m) * net.hidden_dim();
        const double out_bound = 1.0 / std::sqrt(static_cast<double>(m));
        const std::size_t block = mh + 2 * m + 1;
        for (int k = 0; k < net.q_count() - 1; ++k) {
            auto blk = params.subspan(enc + k * block, block);
            fill_uniform(blk.subspan(0, mh + m), head_bound, rng);         // V_k, c_k
            fill_uniform(blk.subspan(mh + m, m + 1), out_bound, rng);      // w_k, d_k
        }
    }
}

} // namespace

void FeedforwardNet::init_weights(std::uint64_t seed) {
    Rng rng(seed);
    const double enc_bound = 1.0 / std::sqrt(static_cast<double>(input_dim_));
    fill_uniform({params_.data(), encoder_param_count()}, enc_bound, rng);
    init_head(*this, rng);
}

void FeedforwardNet::init_head_weights(std::uint64_t seed) {
    Rng rng(seed);
    init_head(*this, rng);
}

// ---------------------------------------------------------------------------
// Training

namespace {

// Forward/backward over one net with explicit activation caches. When
// `encoded_input` is set, the features are already encoder activations and
// only the head runs (used by retrain_head).
class NetTrainer {
public:
    NetTrainer(FeedforwardNet& net, bool encoded_input, std::size_t train_offset)
        : net_(net), encoded_(encoded_input), offset_(train_offset),
          grad_(net.param_count(), 0.0), a_(net.hidden_dim()), h_(net.hidden_dim()),
          out_(net.output_dim()) {
        if (net.head_kind() == HeadKind::ordinal) {
            u_.assign(static_cast<std::size_t>(net.group_dim()) * (net.q_count() - 1), 0.0);
            g_.assign(u_.size(), 0.0);
        }
    }

    void zero_grad() { std::fill(grad_.begin() + offset_, grad_.end(), 0.0); }

    // Accumulates the gradient of this sample's loss; returns the loss.
    double accumulate(std::span<const double> x, int y) {
        forward(x);
        const int q = net_.q_count();
        LossGrad lg = (net_.head_kind() == HeadKind::nominal)
                          ? cross_entropy_loss(out_, y)
                          : mse_ecoc_loss(out_, y, q);
        backward(x, lg.grad);
        return lg.loss;
    }

    double loss_only(std::span<const double> x, int y) {
        forward(x);
        return (net_.head_kind() == HeadKind::nominal)
                   ? cross_entropy_loss(out_, y).loss
                   : mse_ecoc_loss(out_, y, net_.q_count()).loss;
    }

    std::span<double> grad() { return {grad_.data() + offset_, grad_.size() - offset_}; }

private:
    void forward(std::span<const double> x) {
        const auto params = net_.params();
        const int hidden = net_.hidden_dim();
        if (encoded_) {
            std::copy(x.begin(), x.end(), h_.begin());
        } else {
            const double* w = params.data();
            const double* b = params.data() + static_cast<std::size_t>(hidden) * net_.input_dim();
            for (int t = 0; t < hidden; ++t) {
                double a = b[t];
                const double* row = w + static_cast<std::size_t>(t) * net_.input_dim();
                for (int i = 0; i < net_.input_dim(); ++i) a += row[i] * x[i];
                a_[t] = a;
                h_[t] = a > 0.0 ? a : net_.lrelu_slope() * a;
            }
        }
        const double* p = params.data() + net_.encoder_param_count();
        if (net_.head_kind() == HeadKind::nominal) {
            const int q = net_.q_count();
            const double* w2 = p;
            const double* b2 = p + static_cast<std::size_t>(q) * hidden;
            double zmax = -std::numeric_limits<double>::infinity();
            std::vector<double>& z = z_;
            z.resize(q);
            for (int c = 0; c < q; ++c) {
                double v = b2[c];
                const double* row = w2 + static_cast<std::size_t>(c) * hidden;
                for (int i = 0; i < hidden; ++i) v += row[i] * h_[i];
                z[c] = v;
                zmax = std::max(zmax, v);
            }
            double sum = 0.0;
            for (int c = 0; c < q; ++c) {
                out_[c] = std::exp(z[c] - zmax);
                sum += out_[c];
            }
            for (int c = 0; c < q; ++c) out_[c] /= sum;
        } else {
            const int m = net_.group_dim();
            const std::size_t block = static_cast<std::size_t>(m) * hidden + 2 * m + 1;
            for (int k = 0; k < net_.q_count() - 1; ++k) {
                const double* v = p + static_cast<std::size_t>(k) * block;
                const double* c = v + static_cast<std::size_t>(m) * hidden;
                const double* wk = c + m;
                double s = wk[m];
                for (int g = 0; g < m; ++g) {
                    double u = c[g];
                    const double* row = v + static_cast<std::size_t>(g) * hidden;
                    for (int i = 0; i < hidden; ++i) u += row[i] * h_[i];
                    u_[static_cast<std::size_t>(k) * m + g] = u;
                    const double gact = u > 0.0 ? u : net_.lrelu_slope() * u;
                    g_[static_cast<std::size_t>(k) * m + g] = gact;
                    s += wk[g] * gact;
                }
                out_[k] = 1.0 / (1.0 + std::exp(-s));
            }
        }
    }

    // dout is dL/d(pre-softmax logits) or dL/d(pre-sigmoid activations).
    void backward(std::span<const double> x, std::span<const double> dout) {
        const auto params = net_.params();
        const int hidden = net_.hidden_dim();
        const std::size_t enc = net_.encoder_param_count();
        dh_.assign(hidden, 0.0);
        double* gp = grad_.data() + enc;
        const double* p = params.data() + enc;
        if (net_.head_kind() == HeadKind::nominal) {
            const int q = net_.q_count();
            for (int c = 0; c < q; ++c) {
                const double d = dout[c];
                double* gw = gp + static_cast<std::size_t>(c) * hidden;
                const double* w = p + static_cast<std::size_t>(c) * hidden;
                for (int i = 0; i < hidden; ++i) {
                    gw[i] += d * h_[i];
                    dh_[i] += d * w[i];
                }
                gp[static_cast<std::size_t>(q) * hidden + c] += d;
            }
        } else {
            const int m = net_.group_dim();
            const std::size_t block = static_cast<std::size_t>(m) * hidden + 2 * m + 1;
            for (int k = 0; k < net_.q_count() - 1; ++k) {
                const double ds = dout[k];
                const double* v = p + static_cast<std::size_t>(k) * block;
                const double* c = v + static_cast<std::size_t>(m) * hidden;
                const double* wk = c + m;
                double* gv = gp + static_cast<std::size_t>(k) * block;
                double* gc = gv + static_cast<std::size_t>(m) * hidden;
                double* gw = gc + m;
                gw[m] += ds;
                for (int g = 0; g < m; ++g) {
                    const std::size_t idx = static_cast<std::size_t>(k) * m + g;
                    gw[g] += ds * g_[idx];
                    const double du =
                        ds * wk[g] * (u_[idx] > 0.0 ? 1.0 : net_.lrelu_slope());
                    const double* row = v + static_cast<std::size_t>(g) * hidden;
                    double* grow = gv + static_cast<std::size_t>(g) * hidden;
                    for (int i = 0; i < hidden; ++i) {
                        grow[i] += du * h_[i];
                        dh_[i] += du * row[i];
                    }
                    gc[g] += du;
                }
            }
        }
        if (!encoded_ && offset_ == 0) {
            for (int t = 0; t < hidden; ++t) {
                const double da = dh_[t] * (a_[t] > 0.0 ? 1.0 : net_.lrelu_slope());
                double* grow = grad_.data() + static_cast<std::size_t>(t) * net_.input_dim();
                for (int i = 0; i < net_.input_dim(); ++i) grow[i] += da * x[i];
                grad_[static_cast<std::size_t>(hidden) * net_.input_dim() + t] += da;
            }
        }
    }

    FeedforwardNet& net_;
    bool encoded_;
    std::size_t offset_;
    std::vector<double> grad_;
    std::vector<double> a_, h_, u_, g_, z_, dh_;
    std::vector<double> out_;
};

struct TrainOptions {
    bool encoded_input = false;     // features already in encoder space
    std::size_t train_offset = 0;   // first trainable parameter index
};

TrainResult train_loop(FeedforwardNet net, const LabeledDataset& ds, const TrainConfig& cfg,
                       const TrainOptions& opt) {
    ds.validate();
    if (cfg.learning_rate <= 0.0) throw std::invalid_argument("train: learning rate must be > 0");
    if (cfg.patience < 1) throw std::invalid_argument("train: patience must be >= 1");
    if (cfg.batch_size < 1) throw std::invalid_argument("train: batch size must be >= 1");
    if (cfg.max_epochs < 1) throw std::invalid_argument("train: max_epochs must be >= 1");
    for (int c : class_counts(ds))
        if (c == 0) throw std::invalid_argument("train: every class needs at least one sample");

    auto [train_idx, val_idx] =
        holdout_split(ds, 1.0 - cfg.val_fraction, derive_seed(cfg.seed, "val-split"));

    NetTrainer trainer(net, opt.encoded_input, opt.train_offset);
    const std::size_t n_train_params = net.param_count() - opt.train_offset;
    std::vector<double> adam_m(n_train_params, 0.0), adam_v(n_train_params, 0.0);
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    long long adam_t = 0;

    Rng batch_rng(derive_seed(cfg.seed, "batches"));
    std::vector<int> order(train_idx);
    std::vector<double> best_params(net.params().begin(), net.params().end());

    TrainHistory history;
    history.best_val_loss = std::numeric_limits<double>::infinity();
    int since_best = 0;

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        // Fixed batch order permutation per epoch from the seeded stream.
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[batch_rng.below(i)]);

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
            trainer.zero_grad();
            double batch_loss = 0.0;
            for (std::size_t s = start; s < stop; ++s)
                batch_loss += trainer.accumulate(ds.features.row(order[s]), ds.labels[order[s]]);
            epoch_loss += batch_loss;

            const double inv = 1.0 / static_cast<double>(stop - start);
            auto grad = trainer.grad();
            auto params = net.params().subspan(opt.train_offset);
            ++adam_t;
            const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(adam_t));
            const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(adam_t));
            for (std::size_t i = 0; i < n_train_params; ++i) {
                const double g = grad[i] * inv;
                adam_m[i] = beta1 * adam_m[i] + (1.0 - beta1) * g;
                adam_v[i] = beta2 * adam_v[i] + (1.0 - beta2) * g * g;
                params[i] -= cfg.learning_rate * (adam_m[i] / bc1) /
                             (std::sqrt(adam_v[i] / bc2) + eps);
            }
        }
        epoch_loss /= static_cast<double>(order.size());

        double val_loss = 0.0;
        for (int idx : val_idx) val_loss += trainer.loss_only(ds.features.row(idx), ds.labels[idx]);
        val_loss /= static_cast<double>(val_idx.size());

        if (!std::isfinite(epoch_loss) || !std::isfinite(val_loss))
            throw std::runtime_error("train: non-finite loss at epoch " + std::to_string(epoch) +
                                     " (lr=" + std::to_string(cfg.learning_rate) + ")");

        history.train_loss.push_back(epoch_loss);
        history.val_loss.push_back(val_loss);
        history.epochs_run = epoch + 1;
        if (val_loss < history.best_val_loss) { // strict improvement only
            history.best_val_loss = val_loss;
            history.best_epoch = epoch;
            std::copy(net.params().begin(), net.params().end(), best_params.begin());
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            break;
        }
    }

    std::copy(best_params.begin(), best_params.end(), net.params().begin());
    return {std::move(net), std::move(history)};
}

} // namespace

TrainResult train(const LabeledDataset& ds, HeadKind head, const TrainConfig& cfg) {
    FeedforwardNet net(head, ds.dim(), cfg.hidden, ds.q_count);
    net.init_weights(derive_seed(cfg.seed, "init"));
    return train_loop(std::move(net), ds, cfg, {});
}

LabeledDataset project(const FeedforwardNet& net, const LabeledDataset& ds) {
    ds.validate();
    if (ds.dim() != net.input_dim())
        throw std::invalid_argument("project: feature dimension does not match the encoder");
    LabeledDataset out;
    out.features = Matrix(ds.size(), net.hidden_dim());
    out.labels = ds.labels;
    out.q_count = ds.q_count;
    for (int i = 0; i < ds.size(); ++i) net.encode(ds.features.row(i), out.features.row(i));
    return out;
}

TrainResult retrain_head(const FeedforwardNet& net, const LabeledDataset& encoded,
                         const TrainConfig& cfg) {
    if (encoded.dim() != net.hidden_dim())
        throw std::invalid_argument(
            "retrain_head: features must live in encoder space (dim = hidden size)");
    if (encoded.q_count != net.q_count())
        throw std::invalid_argument("retrain_head: class count mismatch");
    FeedforwardNet copy = net;
    copy.init_head_weights(derive_seed(cfg.seed, "init"));
    TrainOptions opt;
    opt.encoded_input = true;
    opt.train_offset = copy.encoder_param_count();
    return train_loop(std::move(copy), encoded, cfg, opt);
}

std::vector<double> predict_scores(const FeedforwardNet& net, std::span<const double> x) {
    const std::vector<double> out = net.forward(x);
    if (net.head_kind() == HeadKind::nominal) return out;
    const EcocCodebook cb = EcocCodebook::make(net.q_count());
    std::vector<double> scores(net.q_count());
    for (int q = 0; q < net.q_count(); ++q) {
        double d = 0.0;
        for (int k = 0; k < net.q_count() - 1; ++k) {
            const double diff = out[k] - cb.codes(q, k);
            d += diff * diff;
        }
        scores[q] = -std::sqrt(d);
    }
    return scores;
}

Matrix predict_scores(const FeedforwardNet& net, const LabeledDataset& ds) {
    Matrix scores(ds.size(), net.q_count());
    for (int i = 0; i < ds.size(); ++i) {
        const std::vector<double> s = predict_scores(net, ds.features.row(i));
        std::copy(s.begin(), s.end(), scores.row(i).begin());
    }
    return scores;
}

int predict_label(const FeedforwardNet& net, std::span<const double> x) {
    const std::vector<double> out = net.forward(x);
    if (net.head_kind() == HeadKind::nominal) {
        int best = 0;
        for (int c = 1; c < net.q_count(); ++c)
            if (out[c] > out[best]) best = c;
        return best;
    }
    const EcocCodebook cb = EcocCodebook::make(net.q_count());
    return ecoc_decode(out, cb);
}

std::vector<int> predict_labels(const FeedforwardNet& net, const LabeledDataset& ds) {
    std::vector<int> out;
    out.reserve(ds.size());
    for (int i = 0; i < ds.size(); ++i) out.push_back(predict_label(net, ds.features.row(i)));
    return out;
}

double mean_loss(const FeedforwardNet& net, const LabeledDataset& ds) {
    double total = 0.0;
    for (int i = 0; i < ds.size(); ++i) {
        const std::vector<double> out = net.forward(ds.features.row(i));
        total += (net.head_kind() == HeadKind::nominal)
                     ? cross_entropy_loss(out, ds.labels[i]).loss
                     : mse_ecoc_loss(out, ds.labels[i], net.q_count()).loss;
    }
    return total / ds.size();
}

double mean_head_loss(const FeedforwardNet& net, const LabeledDataset& encoded) {
    if (encoded.dim() != net.hidden_dim())
        throw std::invalid_argument("mean_head_loss: features must live in encoder space");
    std::vector<double> out(net.output_dim());
    double total = 0.0;
    for (int i = 0; i < encoded.size(); ++i) {
        net.head_forward(encoded.features.row(i), out);
        total += (net.head_kind() == HeadKind::nominal)
                     ? cross_entropy_loss(out, encoded.labels[i]).loss
                     : mse_ecoc_loss(out, encoded.labels[i], net.q_count()).loss;
    }
    return total / encoded.size();
}

void save_checkpoint(const std::string& path, const FeedforwardNet& net, const TrainConfig& cfg) {
    nlohmann::json j;
    j["format"] = "ogo-model-v1";
    j["head"] = head_kind_name(net.head_kind());
    j["input_dim"] = net.input_dim();
    j["hidden_dim"] = net.hidden_dim();
    j["q_count"] = net.q_count();
    j["lrelu_slope"] = net.lrelu_slope();
    j["params"] = std::vector<double>(net.params().begin(), net.params().end());
    j["config"] = {{"learning_rate", cfg.learning_rate}, {"hidden", cfg.hidden},
                   {"patience", cfg.patience},           {"batch_size", cfg.batch_size},
                   {"max_epochs", cfg.max_epochs},       {"seed", cfg.seed},
                   {"val_fraction", cfg.val_fraction}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_checkpoint: cannot open '" + path + "'");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("save_checkpoint: write failed for '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open '" + path + "'");
    nlohmann::json j;
    in >> j;
    if (j.value("format", "") != "ogo-model-v1")
        throw std::runtime_error("load_checkpoint: unrecognized format in '" + path + "'");

    Checkpoint cp;
    FeedforwardNet net(head_kind_from_name(j.at("head").get<std::string>()),
                       j.at("input_dim").get<int>(), j.at("hidden_dim").get<int>(),
                       j.at("q_count").get<int>(), j.at("lrelu_slope").get<double>());
    const auto params = j.at("params").get<std::vector<double>>();
    if (params.size() != net.param_count())
        throw std::runtime_error("load_checkpoint: parameter count mismatch");
    std::copy(params.begin(), params.end(), net.params().begin());
    cp.net = std::move(net);

    const auto& c = j.at("config");
    cp.config.learning_rate = c.at("learning_rate").get<double>();
    cp.config.hidden = c.at("hidden").get<int>();
    cp.config.patience = c.at("patience").get<int>();
    cp.config.batch_size = c.at("batch_size").get<int>();
    cp.config.max_epochs = c.at("max_epochs").get<int>();
    cp.config.seed = c.at("seed").get<std::uint64_t>();
    cp.config.val_fraction = c.at("val_fraction").get<double>();
    return cp;
}

} // namespace ogo
