#include "morl/net.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace morl {

struct QNetwork::Trace {
    std::vector<Vec> feat_act;  // post-relu activations per feature layer
    Vec head_in;
    Vec adv_act, val_act;  // post-relu stream hiddens
    Vec A, V, Q;
};

namespace {

Vec dense_forward(const Vec& W, const Vec& b, const Vec& x, int out, int in) {
    Vec y(static_cast<std::size_t>(out));
    for (int o = 0; o < out; ++o) {
        double s = b[o];
        const double* row = W.data() + static_cast<std::size_t>(o) * in;
        for (int i = 0; i < in; ++i) s += row[i] * x[i];
        y[o] = s;
    }
    return y;
}

void relu_inplace(Vec& v) {
    for (double& x : v)
        if (x < 0.0) x = 0.0;
}

}  // namespace

QNetwork::QNetwork(int obs_dim, int n_actions, int n_objectives, NetConfig cfg, std::uint64_t seed)
    : obs_dim_(obs_dim), n_actions_(n_actions), n_objectives_(n_objectives), cfg_(std::move(cfg)) {
    if (obs_dim <= 0 || n_actions <= 0 || n_objectives <= 0)
        throw std::invalid_argument("QNetwork: bad dimensions");
    cond_dim_ = cfg_.conditioned ? (cfg_.cond_dim > 0 ? cfg_.cond_dim : n_objectives_) : 0;
    Rng rng(seed);
    auto make = [&rng](int in, int out) {
        Dense d;
        d.in = in;
        d.out = out;
        d.W.resize(static_cast<std::size_t>(in) * out);
        d.b.assign(static_cast<std::size_t>(out), 0.0);
        const double lim = std::sqrt(6.0 / in);
        std::uniform_real_distribution<double> u(-lim, lim);
        for (double& w : d.W) w = u(rng);
        d.gW.assign(d.W.size(), 0.0);
        d.gb.assign(d.b.size(), 0.0);
        d.vW.assign(d.W.size(), 0.0);
        d.vb.assign(d.b.size(), 0.0);
        return d;
    };

    int in = obs_dim_;
    for (int h : cfg_.hidden) {
        online_.push_back(make(in, h));
        in = h;
    }
    n_feature_ = online_.size();
    const int head_in = in + cond_dim_;
    online_.push_back(make(head_in, cfg_.head_hidden));                  // adv hidden
    online_.push_back(make(cfg_.head_hidden, n_actions_ * n_objectives_));  // adv out
    online_.push_back(make(head_in, cfg_.head_hidden));                  // value hidden
    online_.push_back(make(cfg_.head_hidden, n_objectives_));            // value out
    target_ = online_;
}

Vec QNetwork::run(const std::vector<Dense>& L, const Vec& obs, const Vec* w,
                  Trace* trace) const {
    if (static_cast<int>(obs.size()) != obs_dim_)
        throw std::invalid_argument("QNetwork: observation length mismatch");
    if (cfg_.conditioned != (w != nullptr))
        throw std::invalid_argument("QNetwork: weight input presence must match conditioning");
    if (w && static_cast<int>(w->size()) != cond_dim_)
        throw std::invalid_argument("QNetwork: weight input length mismatch");

    Vec x = obs;
    if (trace) trace->feat_act.clear();
    for (std::size_t i = 0; i < n_feature_; ++i) {
        x = dense_forward(L[i].W, L[i].b, x, L[i].out, L[i].in);
        relu_inplace(x);
        if (trace) trace->feat_act.push_back(x);
    }
    if (w) x.insert(x.end(), w->begin(), w->end());
    if (trace) trace->head_in = x;

    const Dense& ah = L[n_feature_ + 0];
    const Dense& ao = L[n_feature_ + 1];
    const Dense& vh = L[n_feature_ + 2];
    const Dense& vo = L[n_feature_ + 3];

    Vec a1 = dense_forward(ah.W, ah.b, x, ah.out, ah.in);
    relu_inplace(a1);
    Vec A = dense_forward(ao.W, ao.b, a1, ao.out, ao.in);  // actions x objectives
    Vec v1 = dense_forward(vh.W, vh.b, x, vh.out, vh.in);
    relu_inplace(v1);
    Vec V = dense_forward(vo.W, vo.b, v1, vo.out, vo.in);  // objectives

    Vec Q(static_cast<std::size_t>(n_actions_) * n_objectives_);
    for (int n = 0; n < n_objectives_; ++n) {
        double mean = 0.0;
        for (int a = 0; a < n_actions_; ++a) mean += A[static_cast<std::size_t>(a) * n_objectives_ + n];
        mean /= n_actions_;
        for (int a = 0; a < n_actions_; ++a) {
            const std::size_t idx = static_cast<std::size_t>(a) * n_objectives_ + n;
            Q[idx] = V[n] + A[idx] - mean;
        }
    }
    if (trace) {
        trace->adv_act = std::move(a1);
        trace->val_act = std::move(v1);
        trace->A = std::move(A);
        trace->V = std::move(V);
        trace->Q = Q;
    }
    return Q;
}

Vec QNetwork::forward(const Vec& obs, const Vec* w) const {
    return run(online_, obs, w, nullptr);
}

Vec QNetwork::forward_target(const Vec& obs, const Vec* w) const {
    return run(target_, obs, w, nullptr);
}

Vec QNetwork::value_stream(const Vec& obs, const Vec* w) const {
    Trace trace;
    run(online_, obs, w, &trace);
    return trace.V;
}

void QNetwork::zero_grad() {
    for (Dense& d : online_) {
        std::fill(d.gW.begin(), d.gW.end(), 0.0);
        std::fill(d.gb.begin(), d.gb.end(), 0.0);
    }
}

double QNetwork::backward(const Vec& obs, const Vec* w, int action,
                          const Vec& target, LossForm loss, double scale) {
    if (static_cast<int>(target.size()) != n_objectives_)
        throw std::invalid_argument("QNetwork::backward: target length mismatch");
    for (double t : target)
        if (!std::isfinite(t)) throw std::invalid_argument("QNetwork::backward: non-finite target");
    if (action < 0 || action >= n_actions_)
        throw std::invalid_argument("QNetwork::backward: action out of range");

    Trace tr;
    run(online_, obs, w, &tr);

    // dQ: loss restricted to the taken action's row, averaged over objectives.
    double loss_value = 0.0;
    Vec dQ(static_cast<std::size_t>(n_objectives_), 0.0);  // dL/dQ(action, n)
    for (int n = 0; n < n_objectives_; ++n) {
        const double e = target[n] - tr.Q[static_cast<std::size_t>(action) * n_objectives_ + n];
        if (loss == LossForm::Absolute) {
            loss_value += std::abs(e);
            dQ[n] = (e > 0.0 ? -1.0 : (e < 0.0 ? 1.0 : 0.0));  // subgradient 0 at 0
        } else {
            loss_value += e * e;
            dQ[n] = -2.0 * e;
        }
        dQ[n] *= scale / n_objectives_;
    }
    loss_value *= scale / n_objectives_;

    // Dueling combination: dV[n] = dQ[n]; dA(a,n) = dQ[n] * ([a==action] - 1/|A|).
    Vec dV = dQ;
    Vec dA(static_cast<std::size_t>(n_actions_) * n_objectives_);
    for (int a = 0; a < n_actions_; ++a)
        for (int n = 0; n < n_objectives_; ++n)
            dA[static_cast<std::size_t>(a) * n_objectives_ + n] =
                dQ[n] * ((a == action ? 1.0 : 0.0) - 1.0 / n_actions_);

    auto backprop_dense = [](Dense& d, const Vec& input, const Vec& dout, Vec& din) {
        din.assign(static_cast<std::size_t>(d.in), 0.0);
        for (int o = 0; o < d.out; ++o) {
            const double g = dout[o];
            if (g == 0.0) continue;
            double* grow = d.gW.data() + static_cast<std::size_t>(o) * d.in;
            const double* wrow = d.W.data() + static_cast<std::size_t>(o) * d.in;
            for (int i = 0; i < d.in; ++i) {
                grow[i] += g * input[i];
                din[i] += g * wrow[i];
            }
            d.gb[o] += g;
        }
    };
    auto relu_back = [](Vec& din, const Vec& act) {
        for (std::size_t i = 0; i < din.size(); ++i)
            if (act[i] <= 0.0) din[i] = 0.0;
    };

    Dense& ah = online_[n_feature_ + 0];
    Dense& ao = online_[n_feature_ + 1];
    Dense& vh = online_[n_feature_ + 2];
    Dense& vo = online_[n_feature_ + 3];

    Vec d_a1, d_v1, d_head_a, d_head_v;
    backprop_dense(ao, tr.adv_act, dA, d_a1);
    relu_back(d_a1, tr.adv_act);
    backprop_dense(ah, tr.head_in, d_a1, d_head_a);

    backprop_dense(vo, tr.val_act, dV, d_v1);
    relu_back(d_v1, tr.val_act);
    backprop_dense(vh, tr.head_in, d_v1, d_head_v);

    const std::size_t feat_out = n_feature_ ? static_cast<std::size_t>(online_[n_feature_ - 1].out)
                                            : static_cast<std::size_t>(obs_dim_);
    Vec dx(feat_out);
    for (std::size_t i = 0; i < feat_out; ++i) dx[i] = d_head_a[i] + d_head_v[i];

    for (std::size_t li = n_feature_; li-- > 0;) {
        relu_back(dx, tr.feat_act[li]);
        const Vec& input = li == 0 ? obs : tr.feat_act[li - 1];
        Vec din;
        backprop_dense(online_[li], input, dx, din);
        dx = std::move(din);
    }
    return loss_value;
}

void QNetwork::nesterov(Vec& p, Vec& v, const Vec& g, double lr, double mu) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        v[i] = mu * v[i] - lr * g[i];
        p[i] += mu * v[i] - lr * g[i];
    }
}

void QNetwork::apply_update() {
    for (Dense& d : online_) {
        nesterov(d.W, d.vW, d.gW, cfg_.lr, cfg_.momentum);
        nesterov(d.b, d.vb, d.gb, cfg_.lr, cfg_.momentum);
    }
    zero_grad();
}

void QNetwork::sync_target() { target_ = online_; }

void QNetwork::copy_params_from(const QNetwork& other) {
    if (other.online_.size() != online_.size())
        throw std::invalid_argument("copy_params_from: incompatible networks");
    for (std::size_t i = 0; i < online_.size(); ++i) {
        if (other.online_[i].in != online_[i].in || other.online_[i].out != online_[i].out)
            throw std::invalid_argument("copy_params_from: incompatible layer shapes");
        online_[i].W = other.online_[i].W;
        online_[i].b = other.online_[i].b;
    }
    sync_target();
}

namespace {
constexpr std::uint32_t kMagic = 0x4d514e42;  // "MQNB"
template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("QNetwork::load: truncated stream");
    return v;
}
}  // namespace

void QNetwork::save(std::ostream& out) const {
    write_pod(out, kMagic);
    write_pod<std::int32_t>(out, obs_dim_);
    write_pod<std::int32_t>(out, n_actions_);
    write_pod<std::int32_t>(out, n_objectives_);
    write_pod<std::int32_t>(out, cfg_.conditioned ? 1 : 0);
    write_pod<std::int32_t>(out, static_cast<std::int32_t>(online_.size()));
    for (const Dense& d : online_) {
        write_pod<std::int32_t>(out, d.in);
        write_pod<std::int32_t>(out, d.out);
        out.write(reinterpret_cast<const char*>(d.W.data()),
                  static_cast<std::streamsize>(d.W.size() * sizeof(double)));
        out.write(reinterpret_cast<const char*>(d.b.data()),
                  static_cast<std::streamsize>(d.b.size() * sizeof(double)));
    }
}

void QNetwork::load(std::istream& in) {
    if (read_pod<std::uint32_t>(in) != kMagic) throw std::runtime_error("QNetwork::load: bad magic");
    if (read_pod<std::int32_t>(in) != obs_dim_ || read_pod<std::int32_t>(in) != n_actions_ ||
        read_pod<std::int32_t>(in) != n_objectives_ ||
        read_pod<std::int32_t>(in) != (cfg_.conditioned ? 1 : 0) ||
        read_pod<std::int32_t>(in) != static_cast<std::int32_t>(online_.size()))
        throw std::runtime_error("QNetwork::load: shape header mismatch");
    for (Dense& d : online_) {
        if (read_pod<std::int32_t>(in) != d.in || read_pod<std::int32_t>(in) != d.out)
            throw std::runtime_error("QNetwork::load: layer shape mismatch");
        in.read(reinterpret_cast<char*>(d.W.data()),
                static_cast<std::streamsize>(d.W.size() * sizeof(double)));
        in.read(reinterpret_cast<char*>(d.b.data()),
                static_cast<std::streamsize>(d.b.size() * sizeof(double)));
        if (!in) throw std::runtime_error("QNetwork::load: truncated stream");
    }
    sync_target();
}

Vec QNetwork::flat_params() const {
    Vec out;
    for (const Dense& d : online_) {
        out.insert(out.end(), d.W.begin(), d.W.end());
        out.insert(out.end(), d.b.begin(), d.b.end());
    }
    return out;
}

void QNetwork::set_flat_params(const Vec& p) {
    std::size_t k = 0;
    for (Dense& d : online_) {
        for (double& w : d.W) w = p.at(k++);
        for (double& b : d.b) b = p.at(k++);
    }
    if (k != p.size()) throw std::invalid_argument("set_flat_params: size mismatch");
}

Vec QNetwork::flat_grad() const {
    Vec out;
    for (const Dense& d : online_) {
        out.insert(out.end(), d.gW.begin(), d.gW.end());
        out.insert(out.end(), d.gb.begin(), d.gb.end());
    }
    return out;
}

}  // namespace morl
