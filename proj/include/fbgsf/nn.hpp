#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fbgsf/dataset.hpp"
#include "fbgsf/force.hpp"
#include "fbgsf/geometry.hpp"
#include "fbgsf/rng.hpp"

namespace fbgsf {
namespace nn {

// Activations are stored feature-major: one column per batch element.
using Matrix = Eigen::MatrixXd;

// Dense value container, up to batch x channel x length.
struct Tensor {
    std::vector<int> shape;
    Eigen::VectorXd data;

    static Tensor zeros(std::vector<int> shape);
    int size() const { return static_cast<int>(data.size()); }
    void check() const;  // data length == product of dims, all finite
};

enum class EncoderKind { FC, LSTM, Conv1D };

std::string encoder_name(EncoderKind kind);
EncoderKind encoder_from_name(const std::string& name);

struct TrainConfig {
    double learning_rate = 2e-3;
    int batch_size = 256;
    double weight_decay = 1e-5;
    int epochs = 60;
    uint64_t seed = 0;
    double force_weight = 1.0;      // w_f on the distribution loss
    double magnitude_weight = 1.0;  // weight on the scalar magnitude loss
    double validation_fraction = 0.1;

    void validate() const;
};

// ---- layers -------------------------------------------------------------

struct LinearLayer {
    Matrix W;
    Eigen::VectorXd b;
    Matrix gW;
    Eigen::VectorXd gb;

    void init(int out_dim, int in_dim, fbgsf::Rng& rng);
    Matrix forward(const Matrix& x);
    Matrix backward(const Matrix& gy);

  private:
    Matrix x_;
};

struct ReluLayer {
    Matrix forward(const Matrix& x);
    Matrix backward(const Matrix& gy) const;

  private:
    Matrix mask_;
};

struct SigmoidLayer {
    Matrix forward(const Matrix& x);
    Matrix backward(const Matrix& gy) const;

  private:
    Matrix y_;
};

// Conv1D with kernel 3, stride 1, zero padding 1; activations are
// channel-major columns of length channels*len.
struct Conv1dLayer {
    int in_channels = 0;
    int out_channels = 0;
    int kernel = 3;
    Matrix W;  // out_channels x (in_channels * kernel)
    Eigen::VectorXd b;
    Matrix gW;
    Eigen::VectorXd gb;

    void init(int out_ch, int in_ch, fbgsf::Rng& rng, int kernel_size = 3);
    Matrix forward(const Matrix& x, int len);
    Matrix backward(const Matrix& gy, int len);

  private:
    Matrix cols_;  // cached im2col, (in_ch*kernel) x (len*batch)
};

struct MaxPool1dLayer {
    int size = 2;

    Matrix forward(const Matrix& x, int channels, int len);
    Matrix backward(const Matrix& gy, int channels, int len) const;

  private:
    Eigen::MatrixXi argmax_;
};

// Stacked LSTM run over a spatial sequence, base to tip. Gate order i,f,g,o.
struct LstmStack {
    int input_dim = 1;
    int hidden_dim = 64;
    int num_layers = 3;
    int seq_len = 40;
    std::vector<Matrix> W_ih, W_hh;  // 4H x in, 4H x H per layer
    std::vector<Eigen::VectorXd> bias;

    void init(int input, int hidden, int layers, int steps, fbgsf::Rng& rng);
    // x: seq_len x batch (scalar step inputs). Returns flattened top-layer
    // hidden states, (seq_len*hidden) x batch.
    Matrix forward(const Matrix& x);
    Matrix backward(const Matrix& gy);  // returns gradient w.r.t. x

    std::vector<Matrix> gW_ih, gW_hh;
    std::vector<Eigen::VectorXd> gbias;

  private:
    struct StepCache {
        Matrix x, h_prev, c_prev, i, f, g, o, c, tanh_c;
    };
    std::vector<std::vector<StepCache>> cache_;  // [layer][step]
    int batch_ = 0;
};

// ---- model --------------------------------------------------------------

struct HeadOutputs {
    Matrix curvature;     // M x batch, sigmoid-squashed to (0,1)
    Matrix twist;         // M x batch, sigmoid-squashed
    Matrix force_dist;    // M x batch, linear
    Matrix force_mag;     // 1 x batch, linear
};

struct Model {
    EncoderKind kind = EncoderKind::Conv1D;
    int input_dim = 40;

    // FC encoder
    LinearLayer fc1, fc2;
    ReluLayer fc_relu1, fc_relu2;
    // LSTM encoder
    LstmStack lstm;
    // Conv1D encoder
    Conv1dLayer conv1, conv2, conv3;
    ReluLayer conv_relu1, conv_relu2, conv_relu3;
    MaxPool1dLayer pool1, pool2, pool3;

    LinearLayer head_curvature, head_twist, head_force_dist, head_force_mag;
    SigmoidLayer sig_curvature, sig_twist;

    NormStats stats;
    double decode_threshold = 0.02;  // N, inactive below this peak

    int feature_dim() const;
    void init(EncoderKind kind, int input_dim, uint64_t seed);

    Matrix encode(const Matrix& x);
    Matrix encode_backward(const Matrix& gfeat);
    HeadOutputs forward(const Matrix& x);
    // grads w.r.t. each head output; propagates through the whole net.
    void backward(const HeadOutputs& gy);
    void zero_grads();

    // Flat views over every parameter/gradient, in declaration order.
    struct ParamView {
        double* value;
        double* grad;
        long size;
    };
    std::vector<ParamView> params();
};

// ---- losses -------------------------------------------------------------

// MSE(curvature) + MSE(twist) on 0/1-normalized targets; means over nodes
// and batch. Gradients are written into gk/gphi when non-null.
double shape_loss(const Matrix& pred_curvature, const Matrix& pred_twist,
                  const Matrix& target_curvature, const Matrix& target_twist,
                  Matrix* grad_curvature = nullptr, Matrix* grad_twist = nullptr);

// Sum over grid nodes of squared residuals, mean over batch.
double force_loss(const Matrix& pred_dist, const Matrix& target_dist,
                  Matrix* grad = nullptr);

double rescale_labels(double unit_value, double y_min, double y_max);
double labels_to_unit(double physical_value, double y_min, double y_max);

// ---- optimizer ----------------------------------------------------------

struct AdamState {
    std::vector<Eigen::VectorXd> m, v;
    long step = 0;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    void init(const std::vector<Model::ParamView>& params);
};

// Bias-corrected Adam with decoupled weight decay.
void adam_step(std::vector<Model::ParamView>& params, AdamState& state,
               double learning_rate, double weight_decay);

// ---- training & inference ------------------------------------------------

struct TrainResult {
    Model model;
    std::vector<double> train_losses;  // per epoch
    std::vector<double> val_losses;
    int best_epoch = -1;
};

TrainResult train(const std::vector<Sample>& training, EncoderKind kind,
                  const TrainConfig& config, const NormStats& stats,
                  const WorkspaceConfig& workspace);

struct Inference {
    RodShape shape;
    ContactForce force;
    ForceDistribution distribution;
};

Inference infer(const Eigen::VectorXd& strains, Model& model,
                const WorkspaceConfig& workspace);

void save_model(Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace nn
}  // namespace fbgsf
