#include "fbgsf/nn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fbgsf/detail/serial_types.hpp"

namespace fbgsf {
namespace nn {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr char kModelMagic[8] = {'F', 'B', 'G', 'S', 'F', 'M', 'D', '1'};
constexpr uint32_t kModelVersion = 1;

void uniform_init(Matrix& W, double bound, fbgsf::Rng& rng) {
    for (long c = 0; c < W.cols(); ++c)
        for (long r = 0; r < W.rows(); ++r) W(r, c) = rng.uniform(-bound, bound);
}
}  // namespace

// ---- Tensor ---------------------------------------------------------------

Tensor Tensor::zeros(std::vector<int> shape) {
    Tensor t;
    long n = 1;
    for (int d : shape) n *= d;
    t.shape = std::move(shape);
    t.data = Eigen::VectorXd::Zero(n);
    return t;
}

void Tensor::check() const {
    long n = 1;
    for (int d : shape) n *= d;
    if (n != data.size()) throw std::logic_error("tensor: shape/data mismatch");
#ifndef NDEBUG
    if (!data.allFinite()) throw std::logic_error("tensor: non-finite values");
#endif
}

std::string encoder_name(EncoderKind kind) {
    switch (kind) {
        case EncoderKind::FC: return "fc";
        case EncoderKind::LSTM: return "lstm";
        case EncoderKind::Conv1D: return "conv1d";
    }
    return "?";
}

EncoderKind encoder_from_name(const std::string& name) {
    if (name == "fc") return EncoderKind::FC;
    if (name == "lstm") return EncoderKind::LSTM;
    if (name == "conv1d" || name == "conv") return EncoderKind::Conv1D;
    throw std::invalid_argument("unknown encoder: " + name);
}

void TrainConfig::validate() const {
    if (learning_rate <= 0.0) throw std::invalid_argument("learning rate must be positive");
    if (batch_size <= 0) throw std::invalid_argument("batch size must be positive");
    if (epochs <= 0) throw std::invalid_argument("epochs must be positive");
    if (weight_decay < 0.0) throw std::invalid_argument("weight decay must be non-negative");
}

// ---- LinearLayer ----------------------------------------------------------

void LinearLayer::init(int out_dim, int in_dim, fbgsf::Rng& rng) {
    W.resize(out_dim, in_dim);
    uniform_init(W, 1.0 / std::sqrt(static_cast<double>(in_dim)), rng);
    b = Eigen::VectorXd::Zero(out_dim);
    gW = Matrix::Zero(out_dim, in_dim);
    gb = Eigen::VectorXd::Zero(out_dim);
}

Matrix LinearLayer::forward(const Matrix& x) {
    if (x.rows() != W.cols()) throw std::invalid_argument("linear: shape mismatch");
    x_ = x;
    return (W * x).colwise() + b;
}

Matrix LinearLayer::backward(const Matrix& gy) {
    gW = gy * x_.transpose();
    gb = gy.rowwise().sum();
    return W.transpose() * gy;
}

// ---- activations ----------------------------------------------------------

Matrix ReluLayer::forward(const Matrix& x) {
    mask_ = (x.array() > 0.0).cast<double>();
    return x.cwiseProduct(mask_);
}

Matrix ReluLayer::backward(const Matrix& gy) const { return gy.cwiseProduct(mask_); }

Matrix SigmoidLayer::forward(const Matrix& x) {
    y_ = ((-x.array()).exp() + 1.0).inverse();
    return y_;
}

Matrix SigmoidLayer::backward(const Matrix& gy) const {
    return gy.array() * y_.array() * (1.0 - y_.array());
}

// ---- Conv1dLayer ----------------------------------------------------------

void Conv1dLayer::init(int out_ch, int in_ch, fbgsf::Rng& rng, int kernel_size) {
    in_channels = in_ch;
    out_channels = out_ch;
    kernel = kernel_size;
    W.resize(out_ch, in_ch * kernel);
    uniform_init(W, 1.0 / std::sqrt(static_cast<double>(in_ch * kernel)), rng);
    b = Eigen::VectorXd::Zero(out_ch);
    gW = Matrix::Zero(out_ch, in_ch * kernel);
    gb = Eigen::VectorXd::Zero(out_ch);
}

Matrix Conv1dLayer::forward(const Matrix& x, int len) {
    const int batch = static_cast<int>(x.cols());
    const int pad = kernel / 2;
    if (x.rows() != static_cast<long>(in_channels) * len)
        throw std::invalid_argument("conv1d: shape mismatch");

    cols_ = Matrix::Zero(in_channels * kernel, static_cast<long>(len) * batch);
    for (int bidx = 0; bidx < batch; ++bidx)
        for (int i = 0; i < len; ++i) {
            const long col = static_cast<long>(bidx) * len + i;
            for (int c = 0; c < in_channels; ++c)
                for (int j = 0; j < kernel; ++j) {
                    const int src = i + j - pad;
                    if (src >= 0 && src < len)
                        cols_(c * kernel + j, col) = x(c * len + src, bidx);
                }
        }

    const Matrix y = (W * cols_).colwise() + b;  // out_ch x (len*batch)
    Matrix out(static_cast<long>(out_channels) * len, batch);
    for (int bidx = 0; bidx < batch; ++bidx)
        for (int oc = 0; oc < out_channels; ++oc)
            for (int i = 0; i < len; ++i)
                out(oc * len + i, bidx) = y(oc, static_cast<long>(bidx) * len + i);
    return out;
}

Matrix Conv1dLayer::backward(const Matrix& gy, int len) {
    const int batch = static_cast<int>(gy.cols());
    const int pad = kernel / 2;
    Matrix g(out_channels, static_cast<long>(len) * batch);
    for (int bidx = 0; bidx < batch; ++bidx)
        for (int oc = 0; oc < out_channels; ++oc)
            for (int i = 0; i < len; ++i)
                g(oc, static_cast<long>(bidx) * len + i) = gy(oc * len + i, bidx);

    gW = g * cols_.transpose();
    gb = g.rowwise().sum();

    const Matrix gcols = W.transpose() * g;  // (in_ch*kernel) x (len*batch)
    Matrix gx = Matrix::Zero(static_cast<long>(in_channels) * len, batch);
    for (int bidx = 0; bidx < batch; ++bidx)
        for (int i = 0; i < len; ++i) {
            const long col = static_cast<long>(bidx) * len + i;
            for (int c = 0; c < in_channels; ++c)
                for (int j = 0; j < kernel; ++j) {
                    const int src = i + j - pad;
                    if (src >= 0 && src < len)
                        gx(c * len + src, bidx) += gcols(c * kernel + j, col);
                }
        }
    return gx;
}

// ---- MaxPool1dLayer --------------------------------------------------------

Matrix MaxPool1dLayer::forward(const Matrix& x, int channels, int len) {
    if (len % size != 0)
        throw std::invalid_argument("maxpool: length not divisible by pool size");
    const int batch = static_cast<int>(x.cols());
    const int olen = len / size;
    Matrix out(static_cast<long>(channels) * olen, batch);
    argmax_.resize(static_cast<long>(channels) * olen, batch);
    for (int bidx = 0; bidx < batch; ++bidx)
        for (int c = 0; c < channels; ++c)
            for (int i = 0; i < olen; ++i) {
                int best = c * len + i * size;
                for (int j = 1; j < size; ++j)
                    if (x(c * len + i * size + j, bidx) > x(best, bidx))
                        best = c * len + i * size + j;
                out(c * olen + i, bidx) = x(best, bidx);
                argmax_(c * olen + i, bidx) = best;
            }
    return out;
}

Matrix MaxPool1dLayer::backward(const Matrix& gy, int channels, int len) const {
    const int batch = static_cast<int>(gy.cols());
    const int olen = len / size;
    Matrix gx = Matrix::Zero(static_cast<long>(channels) * len, batch);
    for (int bidx = 0; bidx < batch; ++bidx)
        for (long r = 0; r < static_cast<long>(channels) * olen; ++r)
            gx(argmax_(r, bidx), bidx) += gy(r, bidx);
    return gx;
}

// ---- LstmStack ---------------------------------------------------------------

void LstmStack::init(int input, int hidden, int layers, int steps, fbgsf::Rng& rng) {
    input_dim = input;
    hidden_dim = hidden;
    num_layers = layers;
    seq_len = steps;
    W_ih.assign(layers, Matrix());
    W_hh.assign(layers, Matrix());
    bias.assign(layers, Eigen::VectorXd());
    gW_ih.assign(layers, Matrix());
    gW_hh.assign(layers, Matrix());
    gbias.assign(layers, Eigen::VectorXd());
    for (int l = 0; l < layers; ++l) {
        const int in = (l == 0) ? input : hidden;
        const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
        W_ih[l].resize(4 * hidden, in);
        W_hh[l].resize(4 * hidden, hidden);
        uniform_init(W_ih[l], bound, rng);
        uniform_init(W_hh[l], bound, rng);
        bias[l] = Eigen::VectorXd::Zero(4 * hidden);
        gW_ih[l] = Matrix::Zero(4 * hidden, in);
        gW_hh[l] = Matrix::Zero(4 * hidden, hidden);
        gbias[l] = Eigen::VectorXd::Zero(4 * hidden);
    }
}

Matrix LstmStack::forward(const Matrix& x) {
    if (x.rows() != static_cast<long>(seq_len) * input_dim)
        throw std::invalid_argument("lstm: shape mismatch");
    const int batch = static_cast<int>(x.cols());
    batch_ = batch;
    const int h = hidden_dim;
    cache_.assign(num_layers, std::vector<StepCache>(seq_len));

    Matrix out(static_cast<long>(seq_len) * h, batch);
    std::vector<Matrix> h_prev(num_layers, Matrix::Zero(h, batch));
    std::vector<Matrix> c_prev(num_layers, Matrix::Zero(h, batch));

    for (int t = 0; t < seq_len; ++t) {
        Matrix input = x.middleRows(static_cast<long>(t) * input_dim, input_dim);
        for (int l = 0; l < num_layers; ++l) {
            StepCache& sc = cache_[l][t];
            sc.x = input;
            sc.h_prev = h_prev[l];
            sc.c_prev = c_prev[l];
            const Matrix z =
                ((W_ih[l] * input + W_hh[l] * h_prev[l]).colwise() + bias[l]);
            sc.i = ((-z.topRows(h).array()).exp() + 1.0).inverse();
            sc.f = ((-z.middleRows(h, h).array()).exp() + 1.0).inverse();
            sc.g = z.middleRows(2 * h, h).array().tanh();
            sc.o = ((-z.middleRows(3 * h, h).array()).exp() + 1.0).inverse();
            sc.c = sc.f.cwiseProduct(c_prev[l]) + sc.i.cwiseProduct(sc.g);
            sc.tanh_c = sc.c.array().tanh();
            const Matrix h_t = sc.o.cwiseProduct(sc.tanh_c);
            h_prev[l] = h_t;
            c_prev[l] = sc.c;
            input = h_t;
        }
        out.middleRows(static_cast<long>(t) * h, h) = h_prev[num_layers - 1];
    }
    return out;
}

Matrix LstmStack::backward(const Matrix& gy) {
    const int batch = batch_;
    const int h = hidden_dim;
    for (int l = 0; l < num_layers; ++l) {
        gW_ih[l].setZero();
        gW_hh[l].setZero();
        gbias[l].setZero();
    }

    // Gradient flowing into each layer's output at every step; seeded with gy
    // for the top layer and filled by dx of the layer above for the others.
    std::vector<Matrix> upstream(seq_len);
    for (int t = 0; t < seq_len; ++t)
        upstream[t] = gy.middleRows(static_cast<long>(t) * h, h);

    Matrix gx(static_cast<long>(seq_len) * input_dim, batch);
    for (int l = num_layers - 1; l >= 0; --l) {
        Matrix dh_next = Matrix::Zero(h, batch);
        Matrix dc_next = Matrix::Zero(h, batch);
        std::vector<Matrix> dx(seq_len);
        for (int t = seq_len - 1; t >= 0; --t) {
            const StepCache& sc = cache_[l][t];
            const Matrix dh = upstream[t] + dh_next;
            const Matrix dc =
                dc_next.array() +
                dh.array() * sc.o.array() * (1.0 - sc.tanh_c.array().square());
            const Matrix d_o = dh.cwiseProduct(sc.tanh_c);
            const Matrix d_i = dc.cwiseProduct(sc.g);
            const Matrix d_g = dc.cwiseProduct(sc.i);
            const Matrix d_f = dc.cwiseProduct(sc.c_prev);
            dc_next = dc.cwiseProduct(sc.f);

            Matrix dz(4 * h, batch);
            dz.topRows(h) = d_i.array() * sc.i.array() * (1.0 - sc.i.array());
            dz.middleRows(h, h) = d_f.array() * sc.f.array() * (1.0 - sc.f.array());
            dz.middleRows(2 * h, h) = d_g.array() * (1.0 - sc.g.array().square());
            dz.middleRows(3 * h, h) = d_o.array() * sc.o.array() * (1.0 - sc.o.array());

            gW_ih[l] += dz * sc.x.transpose();
            gW_hh[l] += dz * sc.h_prev.transpose();
            gbias[l] += dz.rowwise().sum();
            dx[t] = W_ih[l].transpose() * dz;
            dh_next = W_hh[l].transpose() * dz;
        }
        if (l == 0) {
            for (int t = 0; t < seq_len; ++t)
                gx.middleRows(static_cast<long>(t) * input_dim, input_dim) = dx[t];
        } else {
            upstream = std::move(dx);
        }
    }
    return gx;
}

// ---- Model -----------------------------------------------------------------

int Model::feature_dim() const {
    switch (kind) {
        case EncoderKind::FC: return 64;
        case EncoderKind::LSTM: return input_dim * 64;
        case EncoderKind::Conv1D: return 256 * (input_dim / 8);
    }
    return 0;
}

void Model::init(EncoderKind encoder, int input, uint64_t seed) {
    kind = encoder;
    input_dim = input;
    fbgsf::Rng rng(seed ^ 0x5F0E1DA1B2C3D4E5ULL);
    switch (kind) {
        case EncoderKind::FC:
            fc1.init(64, input_dim, rng);
            fc2.init(64, 64, rng);
            break;
        case EncoderKind::LSTM:
            lstm.init(1, 64, 3, input_dim, rng);
            break;
        case EncoderKind::Conv1D:
            conv1.init(64, 1, rng);
            conv2.init(128, 64, rng);
            conv3.init(256, 128, rng);
            break;
    }
    const int feat = feature_dim();
    head_curvature.init(input_dim, feat, rng);
    head_twist.init(input_dim, feat, rng);
    head_force_dist.init(input_dim, feat, rng);
    head_force_mag.init(1, feat, rng);
}

Matrix Model::encode(const Matrix& x) {
    switch (kind) {
        case EncoderKind::FC:
            return fc_relu2.forward(fc2.forward(fc_relu1.forward(fc1.forward(x))));
        case EncoderKind::LSTM:
            return lstm.forward(x);
        case EncoderKind::Conv1D: {
            const int len1 = input_dim;       // 40
            const int len2 = len1 / 2;        // 20
            const int len3 = len2 / 2;        // 10
            Matrix a = pool1.forward(conv_relu1.forward(conv1.forward(x, len1)), 64, len1);
            a = pool2.forward(conv_relu2.forward(conv2.forward(a, len2)), 128, len2);
            return pool3.forward(conv_relu3.forward(conv3.forward(a, len3)), 256, len3);
        }
    }
    throw std::logic_error("unreachable");
}

Matrix Model::encode_backward(const Matrix& gfeat) {
    switch (kind) {
        case EncoderKind::FC:
            return fc1.backward(
                fc_relu1.backward(fc2.backward(fc_relu2.backward(gfeat))));
        case EncoderKind::LSTM:
            return lstm.backward(gfeat);
        case EncoderKind::Conv1D: {
            const int len1 = input_dim;
            const int len2 = len1 / 2;
            const int len3 = len2 / 2;
            Matrix g = conv3.backward(
                conv_relu3.backward(pool3.backward(gfeat, 256, len3)), len3);
            g = conv2.backward(conv_relu2.backward(pool2.backward(g, 128, len2)), len2);
            return conv1.backward(conv_relu1.backward(pool1.backward(g, 64, len1)), len1);
        }
    }
    throw std::logic_error("unreachable");
}

HeadOutputs Model::forward(const Matrix& x) {
    const Matrix feat = encode(x);
    HeadOutputs out;
    out.curvature = sig_curvature.forward(head_curvature.forward(feat));
    out.twist = sig_twist.forward(head_twist.forward(feat));
    out.force_dist = head_force_dist.forward(feat);
    out.force_mag = head_force_mag.forward(feat);
    return out;
}

void Model::backward(const HeadOutputs& gy) {
    Matrix gfeat = head_curvature.backward(sig_curvature.backward(gy.curvature));
    gfeat += head_twist.backward(sig_twist.backward(gy.twist));
    gfeat += head_force_dist.backward(gy.force_dist);
    gfeat += head_force_mag.backward(gy.force_mag);
    encode_backward(gfeat);
}

void Model::zero_grads() {
    for (ParamView& p : params())
        Eigen::Map<Eigen::VectorXd>(p.grad, p.size).setZero();
}

std::vector<Model::ParamView> Model::params() {
    std::vector<ParamView> out;
    auto add = [&out](Matrix& w, Matrix& g) {
        out.push_back({w.data(), g.data(), w.size()});
    };
    auto addv = [&out](Eigen::VectorXd& w, Eigen::VectorXd& g) {
        out.push_back({w.data(), g.data(), w.size()});
    };
    switch (kind) {
        case EncoderKind::FC:
            add(fc1.W, fc1.gW);
            addv(fc1.b, fc1.gb);
            add(fc2.W, fc2.gW);
            addv(fc2.b, fc2.gb);
            break;
        case EncoderKind::LSTM:
            for (int l = 0; l < lstm.num_layers; ++l) {
                add(lstm.W_ih[l], lstm.gW_ih[l]);
                add(lstm.W_hh[l], lstm.gW_hh[l]);
                addv(lstm.bias[l], lstm.gbias[l]);
            }
            break;
        case EncoderKind::Conv1D:
            add(conv1.W, conv1.gW);
            addv(conv1.b, conv1.gb);
            add(conv2.W, conv2.gW);
            addv(conv2.b, conv2.gb);
            add(conv3.W, conv3.gW);
            addv(conv3.b, conv3.gb);
            break;
    }
    add(head_curvature.W, head_curvature.gW);
    addv(head_curvature.b, head_curvature.gb);
    add(head_twist.W, head_twist.gW);
    addv(head_twist.b, head_twist.gb);
    add(head_force_dist.W, head_force_dist.gW);
    addv(head_force_dist.b, head_force_dist.gb);
    add(head_force_mag.W, head_force_mag.gW);
    addv(head_force_mag.b, head_force_mag.gb);
    return out;
}

// ---- losses ------------------------------------------------------------------

double shape_loss(const Matrix& pred_curvature, const Matrix& pred_twist,
                  const Matrix& target_curvature, const Matrix& target_twist,
                  Matrix* grad_curvature, Matrix* grad_twist) {
    if (pred_curvature.rows() != target_curvature.rows() ||
        pred_curvature.cols() != target_curvature.cols() ||
        pred_twist.rows() != target_twist.rows() ||
        pred_twist.cols() != target_twist.cols())
        throw std::invalid_argument("shape_loss: shape mismatch");
    const double n_k = static_cast<double>(pred_curvature.size());
    const double n_p = static_cast<double>(pred_twist.size());
    const Matrix rk = pred_curvature - target_curvature;
    const Matrix rp = pred_twist - target_twist;
    if (grad_curvature) *grad_curvature = 2.0 * rk / n_k;
    if (grad_twist) *grad_twist = 2.0 * rp / n_p;
    return rk.squaredNorm() / n_k + rp.squaredNorm() / n_p;
}

double force_loss(const Matrix& pred_dist, const Matrix& target_dist, Matrix* grad) {
    if (pred_dist.rows() != target_dist.rows() ||
        pred_dist.cols() != target_dist.cols())
        throw std::invalid_argument("force_loss: shape mismatch");
    const double batch = static_cast<double>(pred_dist.cols());
    const Matrix r = pred_dist - target_dist;
    if (grad) *grad = 2.0 * r / batch;
    return r.squaredNorm() / batch;
}

double rescale_labels(double unit_value, double y_min, double y_max) {
    if (!(y_max > y_min)) throw std::invalid_argument("rescale_labels: degenerate range");
    return unit_value * (y_max - y_min) + y_min;
}

double labels_to_unit(double physical_value, double y_min, double y_max) {
    if (!(y_max > y_min)) throw std::invalid_argument("labels_to_unit: degenerate range");
    return (physical_value - y_min) / (y_max - y_min);
}

// ---- optimizer ----------------------------------------------------------------

void AdamState::init(const std::vector<Model::ParamView>& params) {
    m.clear();
    v.clear();
    step = 0;
    for (const auto& p : params) {
        m.push_back(Eigen::VectorXd::Zero(p.size));
        v.push_back(Eigen::VectorXd::Zero(p.size));
    }
}

void adam_step(std::vector<Model::ParamView>& params, AdamState& state,
               double learning_rate, double weight_decay) {
    if (state.m.size() != params.size())
        throw std::invalid_argument("adam_step: state not initialized for params");
    ++state.step;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (size_t i = 0; i < params.size(); ++i) {
        Eigen::Map<Eigen::VectorXd> w(params[i].value, params[i].size);
        Eigen::Map<const Eigen::VectorXd> g(params[i].grad, params[i].size);
        if (!g.allFinite()) throw std::runtime_error("adam_step: non-finite gradient");
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] =
            state.beta2 * state.v[i].array() + (1.0 - state.beta2) * g.array().square();
        const Eigen::ArrayXd m_hat = state.m[i].array() / bc1;
        const Eigen::ArrayXd v_hat = state.v[i].array() / bc2;
        w.array() -= learning_rate * (m_hat / (v_hat.sqrt() + state.eps));
        if (weight_decay > 0.0) w.array() -= learning_rate * weight_decay * w.array();
    }
}

// ---- training --------------------------------------------------------------

namespace {

struct Batch {
    Matrix x, target_curvature, target_twist, target_dist, target_mag;
};

Batch gather(const Matrix& X, const Matrix& TK, const Matrix& TP, const Matrix& TD,
             const Matrix& TM, const std::vector<int>& idx, int begin, int count) {
    Batch b;
    b.x.resize(X.rows(), count);
    b.target_curvature.resize(TK.rows(), count);
    b.target_twist.resize(TP.rows(), count);
    b.target_dist.resize(TD.rows(), count);
    b.target_mag.resize(1, count);
    for (int j = 0; j < count; ++j) {
        const int s = idx[begin + j];
        b.x.col(j) = X.col(s);
        b.target_curvature.col(j) = TK.col(s);
        b.target_twist.col(j) = TP.col(s);
        b.target_dist.col(j) = TD.col(s);
        b.target_mag.col(j) = TM.col(s);
    }
    return b;
}

double evaluate_loss(Model& model, const Batch& b, const TrainConfig& config) {
    const HeadOutputs out = model.forward(b.x);
    const double ls =
        shape_loss(out.curvature, out.twist, b.target_curvature, b.target_twist);
    const double lf = force_loss(out.force_dist, b.target_dist);
    const double lm =
        (out.force_mag - b.target_mag).squaredNorm() / b.target_mag.cols();
    return ls + config.force_weight * lf + config.magnitude_weight * lm;
}

}  // namespace

TrainResult train(const std::vector<Sample>& training, EncoderKind kind,
                  const TrainConfig& config, const NormStats& stats,
                  const WorkspaceConfig& workspace) {
    config.validate();
    if (!stats.fitted) throw std::invalid_argument("train: stats not fitted");
    if (training.empty()) throw std::invalid_argument("train: empty corpus");

    const int n = static_cast<int>(training.size());
    const int m = static_cast<int>(training.front().strains.size());

    Matrix X(m, n), TK(m, n), TP(m, n), TD(m, n), TM(1, n);
    for (int i = 0; i < n; ++i) {
        const Sample& s = training[i];
        X.col(i) = normalize(s.strains, stats);
        for (int r = 0; r < m; ++r) {
            TK(r, i) = labels_to_unit(s.gt_curvatures[r], stats.kappa_min, stats.kappa_max);
            TP(r, i) = labels_to_unit(s.gt_twists[r], stats.twist_min, stats.twist_max);
        }
        TD.col(i) = s.gt_distribution;
        TM(0, i) = labels_to_unit(s.gt_force.magnitude, stats.force_min, stats.force_max);
    }

    int n_val = (n > 1) ? std::max(1, static_cast<int>(std::lround(
                              config.validation_fraction * n)))
                        : 0;
    if (n_val >= n) n_val = n - 1;
    const int n_train = n - n_val;

    TrainResult result;
    Model& model = result.model;
    model.init(kind, m, config.seed);
    model.stats = stats;

    std::vector<Model::ParamView> params = model.params();
    AdamState adam;
    adam.init(params);

    std::vector<int> train_idx(n_train), val_idx(n_val);
    for (int i = 0; i < n_train; ++i) train_idx[i] = i;
    for (int i = 0; i < n_val; ++i) val_idx[i] = n_train + i;

    Model best = model;
    double best_val = std::numeric_limits<double>::infinity();

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        // cosine decay to 1% of the initial rate; a constant step keeps the
        // weights bouncing around the optimum well above the tip-error budget
        const double progress =
            (config.epochs > 1) ? static_cast<double>(epoch) / (config.epochs - 1) : 0.0;
        const double lr = config.learning_rate *
                          (0.01 + 0.99 * 0.5 * (1.0 + std::cos(kPi * progress)));
        fbgsf::Rng rng = fbgsf::Rng::substream(config.seed, 1000 + epoch);
        for (size_t i = train_idx.size(); i > 1; --i)
            std::swap(train_idx[i - 1], train_idx[rng.below(i)]);

        double epoch_loss = 0.0;
        int batches = 0;
        for (int begin = 0; begin < n_train; begin += config.batch_size) {
            const int count = std::min(config.batch_size, n_train - begin);
            const Batch b = gather(X, TK, TP, TD, TM, train_idx, begin, count);

            const HeadOutputs out = model.forward(b.x);
            HeadOutputs grads;
            const double ls = shape_loss(out.curvature, out.twist, b.target_curvature,
                                         b.target_twist, &grads.curvature, &grads.twist);
            const double lf = force_loss(out.force_dist, b.target_dist, &grads.force_dist);
            const Matrix rm = out.force_mag - b.target_mag;
            const double lm = rm.squaredNorm() / count;
            grads.force_dist *= config.force_weight;
            grads.force_mag = config.magnitude_weight * 2.0 * rm / count;

            const double loss =
                ls + config.force_weight * lf + config.magnitude_weight * lm;
            if (!std::isfinite(loss))
                throw std::runtime_error("train: loss diverged at epoch " +
                                         std::to_string(epoch));
            epoch_loss += loss;
            ++batches;

            model.backward(grads);
            adam_step(params, adam, lr, config.weight_decay);
        }
        result.train_losses.push_back(epoch_loss / std::max(1, batches));

        double val_loss = result.train_losses.back();
        if (n_val > 0) {
            const Batch vb = gather(X, TK, TP, TD, TM, val_idx, 0, n_val);
            val_loss = evaluate_loss(model, vb, config);
        }
        result.val_losses.push_back(val_loss);
        if (val_loss < best_val) {
            best_val = val_loss;
            best = model;
            result.best_epoch = epoch;
        }
    }

    best.stats = stats;
    (void)workspace;
    result.model = best;
    return result;
}

// ---- inference ----------------------------------------------------------------

Inference infer(const Eigen::VectorXd& strains, Model& model,
                const WorkspaceConfig& workspace) {
    if (!model.stats.fitted) throw std::invalid_argument("infer: stats missing");
    const int m = model.input_dim;
    if (strains.size() != m) throw std::invalid_argument("infer: frame length mismatch");

    Matrix x(m, 1);
    x.col(0) = normalize(strains, model.stats);
    const HeadOutputs out = model.forward(x);

    Eigen::VectorXd curvatures(m), twists(m);
    for (int r = 0; r < m; ++r) {
        curvatures[r] =
            rescale_labels(out.curvature(r, 0), model.stats.kappa_min, model.stats.kappa_max);
        twists[r] =
            rescale_labels(out.twist(r, 0), model.stats.twist_min, model.stats.twist_max);
    }

    Inference inf;
    const double step = workspace.rod_length / m;
    inf.shape = integrate_shape(curvatures, twists, step);

    inf.distribution.sigma = 3.0;
    inf.distribution.grid.resize(m);
    for (int i = 0; i < m; ++i) inf.distribution.grid[i] = i * step;
    inf.distribution.values = out.force_dist.col(0).cwiseMax(0.0);

    const double mag_unit = std::clamp(out.force_mag(0, 0), 0.0, 1.0);
    const double magnitude =
        rescale_labels(mag_unit, model.stats.force_min, model.stats.force_max);
    inf.force = decode_force(inf.distribution, magnitude, model.decode_threshold);
    return inf;
}

// ---- serialization --------------------------------------------------------------

void save_model(Model& model, const std::string& path) {
    detail::Writer w;
    w.pod<uint32_t>(static_cast<uint32_t>(model.kind));
    w.pod<int32_t>(model.input_dim);
    w.pod(model.decode_threshold);
    detail::write_stats(w, model.stats);
    for (const Model::ParamView& p : model.params()) w.raw(p.value, p.size);
    detail::write_container(path, kModelMagic, kModelVersion, w.buf);
}

Model load_model(const std::string& path) {
    const std::vector<char> payload =
        detail::read_container(path, kModelMagic, kModelVersion);
    detail::Reader r{payload.data(), payload.data() + payload.size()};
    Model model;
    const uint32_t kind = r.pod<uint32_t>();
    const int input_dim = r.pod<int32_t>();
    model.init(static_cast<EncoderKind>(kind), input_dim, 0);
    model.decode_threshold = r.pod<double>();
    model.stats = detail::read_stats(r);
    for (Model::ParamView& p : model.params()) {
        const Eigen::VectorXd v = r.vec();
        if (v.size() != p.size) throw std::runtime_error("model file: dim mismatch");
        Eigen::Map<Eigen::VectorXd>(p.value, p.size) = v;
    }
    return model;
}

}  // namespace nn
}  // namespace fbgsf
