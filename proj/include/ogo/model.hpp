#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ogo/dataset.hpp"
#include "ogo/matrix.hpp"

namespace ogo {

// Cumulative codewords: class q maps to (1,...,1,0,...,0) with q ones, so
// adjacent classes differ in exactly one bit.
struct EcocCodebook {
    int q_count = 0;
    Matrix codes; // Q x (Q-1), entries 0/1

    static EcocCodebook make(int q_count);
};

std::vector<double> ecoc_encode(int q, int q_count);

// argmin_q ||o - c_q||_2, ties toward the lower class index.
int ecoc_decode(std::span<const double> outputs, const EcocCodebook& codebook);

// Frank-Hall conversion of cumulative outputs to per-class values:
// p_0 = 1 - o_1, interior p_q = o_q - o_{q+1}, p_{Q-1} = o_{Q-1}.
// Entries may be negative when the outputs are not monotone; they are
// preserved, not clipped. The sum telescopes to 1 exactly.
std::vector<double> cumulative_to_probs(std::span<const double> outputs);

struct LossGrad {
    double loss = 0.0;
    std::vector<double> grad; // w.r.t. pre-activation outputs
    bool clamped = false;     // true if a zero probability was clamped
};

// Categorical cross-entropy; grad is w.r.t. the pre-softmax logits
// (= probs - onehot(y)). A zero probability at the true class is clamped at
// 1e-12 and flagged.
LossGrad cross_entropy_loss(std::span<const double> probs, int y);

// ECOC mean squared error against the cumulative codeword of y; grad is
// w.r.t. the pre-sigmoid activations (chains through the sigmoids).
LossGrad mse_ecoc_loss(std::span<const double> outputs, int y, int q_count);

enum class HeadKind { nominal, ordinal };

const char* head_kind_name(HeadKind k);
HeadKind head_kind_from_name(std::string_view name);

// Encoder g: one fully connected LReLU layer d -> H (the projected space has
// d' = H). Nominal head: linear H -> Q plus softmax. Ordinal head: Q-1
// groups of H/(Q-1) LReLU hidden units, each feeding a single sigmoid.
class FeedforwardNet {
public:
    FeedforwardNet() = default;
    FeedforwardNet(HeadKind head, int input_dim, int hidden_dim, int q_count,
                   double lrelu_slope = 0.01);

    HeadKind head_kind() const { return head_; }
    int input_dim() const { return input_dim_; }
    int hidden_dim() const { return hidden_dim_; }
    int q_count() const { return q_count_; }
    int group_dim() const { return group_dim_; }
    int output_dim() const { return head_ == HeadKind::nominal ? q_count_ : q_count_ - 1; }
    double lrelu_slope() const { return slope_; }

    std::size_t param_count() const { return params_.size(); }
    std::size_t encoder_param_count() const;
    std::size_t head_param_count() const { return params_.size() - encoder_param_count(); }
    std::span<double> params() { return params_; }
    std::span<const double> params() const { return params_; }

    // Encoder activations (the projection g).
    void encode(std::span<const double> x, std::span<double> hidden_out) const;
    // Head on already-encoded features: softmax probabilities (Q) or
    // sigmoid outputs (Q-1).
    void head_forward(std::span<const double> h, std::span<double> out) const;
    std::vector<double> forward(std::span<const double> x) const;

    void init_weights(std::uint64_t seed);
    void init_head_weights(std::uint64_t seed);

private:
    HeadKind head_ = HeadKind::nominal;
    int input_dim_ = 0;
    int hidden_dim_ = 0;
    int q_count_ = 0;
    int group_dim_ = 0; // ordinal head only
    double slope_ = 0.01;
    std::vector<double> params_;
};

struct TrainConfig {
    double learning_rate = 1e-3;
    int hidden = 16;
    int patience = 50;
    int batch_size = 32;
    int max_epochs = 500;
    std::uint64_t seed = 0;
    double val_fraction = 0.1;
};

struct TrainHistory {
    std::vector<double> train_loss; // per epoch
    std::vector<double> val_loss;
    int best_epoch = -1;
    double best_val_loss = 0.0;
    int epochs_run = 0;
};

struct TrainResult {
    FeedforwardNet net;
    TrainHistory history;
};

// Mini-batch Adam (0.9 / 0.999 / 1e-8) with early stopping on a stratified
// validation split drawn from cfg; the best-validation weights are restored.
// Deterministic given cfg.seed: validation split, weight init and the batch
// permutation of each epoch all come from derived sub-streams.
TrainResult train(const LabeledDataset& ds, HeadKind head, const TrainConfig& cfg);

// Features replaced by encoder activations; labels preserved.
LabeledDataset project(const FeedforwardNet& net, const LabeledDataset& ds);

// Re-initializes and retrains only the head on a dataset living in encoder
// space; the encoder weights are untouched (bitwise).
TrainResult retrain_head(const FeedforwardNet& net, const LabeledDataset& encoded,
                         const TrainConfig& cfg);

// Per-class scores: softmax probabilities for the nominal head, negative
// L2 code distance for the ordinal head (argmax agrees with ecoc_decode).
std::vector<double> predict_scores(const FeedforwardNet& net, std::span<const double> x);
Matrix predict_scores(const FeedforwardNet& net, const LabeledDataset& ds);
int predict_label(const FeedforwardNet& net, std::span<const double> x);
std::vector<int> predict_labels(const FeedforwardNet& net, const LabeledDataset& ds);

// Mean loss of the net's own criterion over a dataset (raw feature space).
double mean_loss(const FeedforwardNet& net, const LabeledDataset& ds);
// Same but for features already in encoder space.
double mean_head_loss(const FeedforwardNet& net, const LabeledDataset& encoded);

// JSON checkpoint (format documented in the README).
void save_checkpoint(const std::string& path, const FeedforwardNet& net, const TrainConfig& cfg);
struct Checkpoint {
    FeedforwardNet net;
    TrainConfig config;
};
Checkpoint load_checkpoint(const std::string& path);

} // namespace ogo
