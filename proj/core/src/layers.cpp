#include "pat/nn/layers.hpp"

#include "pat/autodiff/ops.hpp"

namespace pat::nn {

namespace {

void record(TapeNode& tape, const RealVector& x, const RealVector& params, const RealVector& y) {
    tape.input = x;
    tape.params = params;
    tape.output = y;
    tape.valid = true;
}

void check_tape(const TapeNode& tape, const char* who) {
    if (!tape.valid) throw UsageError(std::string(who) + ": vjp called without a forward tape");
}

}  // namespace

// ---- RepeatLayer ----------------------------------------------------------------

RepeatLayer::RepeatLayer(Eigen::Index in_dim, int k) : in_(in_dim), k_(k) {
    if (k < 1) throw DimensionError("RepeatLayer: k must be >= 1");
}

RealVector RepeatLayer::forward(const RealVector& x, TapeNode& tape, const ExecContext&) const {
    require_dim(x, in_, "Repeat input");
    RealVector y = ad::repeat_each(x, k_);
    record(tape, x, params_, y);
    return y;
}

RealVector RepeatLayer::vjp(const TapeNode& tape, const RealVector& g_out, GradientSet&,
                            const ExecContext&) const {
    check_tape(tape, "Repeat");
    return ad::vjp_repeat_each(k_, g_out);
}

// ---- ScalarRescaleLayer ----------------------------------------------------------

ScalarRescaleLayer::ScalarRescaleLayer(Eigen::Index dim) : dim_(dim) {
    params_ = RealVector::Zero(2);
    params_[0] = 1.0;
}

RealVector ScalarRescaleLayer::forward(const RealVector& x, TapeNode& tape,
                                       const ExecContext&) const {
    require_dim(x, dim_, "ScalarRescale input");
    RealVector y = params_[0] * x + RealVector::Constant(dim_, params_[1]);
    record(tape, x, params_, y);
    return y;
}

RealVector ScalarRescaleLayer::vjp(const TapeNode& tape, const RealVector& g_out,
                                   GradientSet& grads, const ExecContext&) const {
    check_tape(tape, "ScalarRescale");
    RealVector g_p(2);
    g_p[0] = g_out.dot(tape.input);
    g_p[1] = g_out.sum();
    grads.accumulate(registry_index, g_p);
    return tape.params[0] * g_out;
}

// ---- ElementwiseRescaleLayer ------------------------------------------------------

ElementwiseRescaleLayer::ElementwiseRescaleLayer(Eigen::Index dim) : dim_(dim) {
    params_ = RealVector::Zero(2 * dim);
    params_.head(dim).setOnes();
}

RealVector ElementwiseRescaleLayer::forward(const RealVector& x, TapeNode& tape,
                                            const ExecContext&) const {
    require_dim(x, dim_, "ElementwiseRescale input");
    RealVector y = params_.head(dim_).cwiseProduct(x) + params_.tail(dim_);
    record(tape, x, params_, y);
    return y;
}

RealVector ElementwiseRescaleLayer::vjp(const TapeNode& tape, const RealVector& g_out,
                                        GradientSet& grads, const ExecContext&) const {
    check_tape(tape, "ElementwiseRescale");
    RealVector g_p(2 * dim_);
    g_p.head(dim_) = g_out.cwiseProduct(tape.input);
    g_p.tail(dim_) = g_out;
    grads.accumulate(registry_index, g_p);
    return tape.params.head(dim_).cwiseProduct(g_out);
}

// ---- ConcatParamsLayer --------------------------------------------------------------

ConcatParamsLayer::ConcatParamsLayer(Eigen::Index in_dim, RealVector init_params) : in_(in_dim) {
    params_ = std::move(init_params);
}

RealVector ConcatParamsLayer::forward(const RealVector& x, TapeNode& tape,
                                      const ExecContext&) const {
    require_dim(x, in_, "ConcatParams input");
    RealVector y = ad::concat(x, params_);
    record(tape, x, params_, y);
    return y;
}

RealVector ConcatParamsLayer::vjp(const TapeNode& tape, const RealVector& g_out,
                                  GradientSet& grads, const ExecContext&) const {
    check_tape(tape, "ConcatParams");
    grads.accumulate(registry_index, g_out.tail(params_.size()));
    return g_out.head(in_);
}

// ---- PhysicalLayer -------------------------------------------------------------------

PhysicalLayer::PhysicalLayer(const phys::PhysicalSystem& true_system, RealVector init_params,
                             Eigen::Index bounded_params)
    : true_system_(&true_system) {
    params_ = std::move(init_params);
    require_dim(params_, true_system.param_dim(), "PhysicalLayer init params");
    bounded_ = bounded_params < 0 ? params_.size() : bounded_params;
    if (bounded_ > params_.size()) throw DimensionError("PhysicalLayer: bounded section too long");
}

void PhysicalLayer::set_model(const phys::PhysicalSystem* model) {
    if (model != nullptr) {
        ad::SplitFunction check(*true_system_, *model);  // dim validation
        (void)check;
    }
    model_system_ = model;
}

const phys::PhysicalSystem& PhysicalLayer::select(ExecContext::Fn which, const char* side) const {
    if (which == ExecContext::Fn::True) return *true_system_;
    if (model_system_ == nullptr) {
        throw UsageError(std::string("PhysicalLayer: no digital model attached but the ") + side +
                         " pass requested one");
    }
    return *model_system_;
}

RealVector PhysicalLayer::forward(const RealVector& x, TapeNode& tape, const ExecContext& ctx) const {
    ad::SplitFunction node;
    node.forward_fn = &select(ctx.forward_fn, "forward");
    node.backward_fn = node.forward_fn;
    ad::SplitResult r = ad::forward_split(node, x, params_, registry_index);
    tape = std::move(r.tape);
    return r.output;
}

RealVector PhysicalLayer::vjp(const TapeNode& tape, const RealVector& g_out, GradientSet& grads,
                              const ExecContext& ctx) const {
    check_tape(tape, "Physical");
    ad::SplitFunction node;
    node.backward_fn = &select(ctx.backward_fn, "backward");
    node.forward_fn = node.backward_fn;
    auto pb = ad::backward_split(node, tape, g_out);
    grads.accumulate(registry_index, pb.g_theta);
    return pb.g_x;
}

// ---- RenormRescaleLayer ------------------------------------------------------------------

RenormRescaleLayer::RenormRescaleLayer(Eigen::Index dim) : dim_(dim) {
    params_ = RealVector::Zero(2);
    params_[0] = 1.0;
}

RealVector RenormRescaleLayer::forward(const RealVector& x, TapeNode& tape,
                                       const ExecContext&) const {
    require_dim(x, dim_, "RenormRescale input");
    RealVector y = ad::max_normalize(x, params_[0], params_[1], "RenormRescale");
    record(tape, x, params_, y);
    return y;
}

RealVector RenormRescaleLayer::vjp(const TapeNode& tape, const RealVector& g_out,
                                   GradientSet& grads, const ExecContext&) const {
    check_tape(tape, "RenormRescale");
    RealVector g_p(2);
    g_p[0] = ad::vjp_max_normalize_scale(tape.input, g_out);
    g_p[1] = ad::vjp_max_normalize_offset(g_out);
    grads.accumulate(registry_index, g_p);
    return ad::vjp_max_normalize_input(tape.input, tape.params[0], g_out);
}

// ---- CropLayer -----------------------------------------------------------------------------

CropLayer::CropLayer(Eigen::Index in_dim, Eigen::Index start, Eigen::Index len)
    : in_(in_dim), start_(start), len_(len) {
    if (start < 0 || len < 1 || start + len > in_dim) {
        throw DimensionError("CropLayer: invalid window");
    }
}

RealVector CropLayer::forward(const RealVector& x, TapeNode& tape, const ExecContext&) const {
    require_dim(x, in_, "Crop input");
    RealVector y = ad::crop(x, start_, len_);
    record(tape, x, params_, y);
    return y;
}

RealVector CropLayer::vjp(const TapeNode& tape, const RealVector& g_out, GradientSet&,
                          const ExecContext&) const {
    check_tape(tape, "Crop");
    return ad::vjp_crop(in_, start_, g_out);
}

// ---- BinSumLayer ----------------------------------------------------------------------------

BinSumLayer::BinSumLayer(Eigen::Index in_dim, int k, bool average)
    : in_(in_dim), k_(k), average_(average) {
    if (k < 1 || in_dim % k != 0) throw DimensionError("BinSumLayer: dim not divisible by bin size");
}

RealVector BinSumLayer::forward(const RealVector& x, TapeNode& tape, const ExecContext&) const {
    require_dim(x, in_, "BinSum input");
    RealVector y = ad::bin_sum(x, k_, average_);
    record(tape, x, params_, y);
    return y;
}

RealVector BinSumLayer::vjp(const TapeNode& tape, const RealVector& g_out, GradientSet&,
                            const ExecContext&) const {
    check_tape(tape, "BinSum");
    return ad::vjp_bin_sum(in_, k_, average_, g_out);
}

// ---- SoftmaxTLayer -----------------------------------------------------------------------------

SoftmaxTLayer::SoftmaxTLayer(Eigen::Index dim, double init_temperature) : dim_(dim) {
    if (!(init_temperature > 0.0)) throw DomainError("SoftmaxTLayer: temperature must be positive");
    params_ = RealVector::Constant(1, init_temperature);
}

RealVector SoftmaxTLayer::forward(const RealVector& x, TapeNode& tape, const ExecContext&) const {
    require_dim(x, dim_, "SoftmaxT input");
    RealVector y = ad::softmax(x / params_[0]);
    record(tape, x, params_, y);
    return y;
}

RealVector SoftmaxTLayer::vjp(const TapeNode& tape, const RealVector& g_out, GradientSet& grads,
                              const ExecContext&) const {
    check_tape(tape, "SoftmaxT");
    const double t = tape.params[0];
    const RealVector u = tape.input / t;
    const RealVector g_u = ad::vjp_softmax(u, g_out);
    RealVector g_p(1);
    g_p[0] = -g_u.dot(tape.input) / (t * t);
    grads.accumulate(registry_index, g_p);
    return g_u / t;
}

// ---- SkipAddLayer --------------------------------------------------------------------------------

SkipAddLayer::SkipAddLayer(LayerStack inner, double init_skip_weight) : inner_(std::move(inner)) {
    if (inner_.empty()) throw DimensionError("SkipAddLayer: empty inner stack");
    in_ = inner_.front()->input_dim();
    if (inner_.back()->output_dim() != in_) {
        throw DimensionError("SkipAddLayer: inner stack must preserve dimension");
    }
    params_ = RealVector::Constant(1, init_skip_weight);
}

void SkipAddLayer::collect(std::vector<Layer*>& out) {
    out.push_back(this);
    for (auto& l : inner_) l->collect(out);
}

RealVector SkipAddLayer::forward(const RealVector& x, TapeNode& tape, const ExecContext& ctx) const {
    require_dim(x, in_, "SkipAdd input");
    tape.children.resize(1);
    RealVector y = ad::forward_stack(inner_, x, tape.children[0], ctx);
    y += params_[0] * x;
    record(tape, x, params_, y);
    return y;
}

RealVector SkipAddLayer::vjp(const TapeNode& tape, const RealVector& g_out, GradientSet& grads,
                             const ExecContext& ctx) const {
    check_tape(tape, "SkipAdd");
    RealVector g_p(1);
    g_p[0] = g_out.dot(tape.input);
    grads.accumulate(registry_index, g_p);
    RealVector g_x = ad::backprop_stack(inner_, tape.children[0], g_out, grads, ctx);
    g_x += tape.params[0] * g_out;
    return g_x;
}

// ---- EnsembleSumLayer ------------------------------------------------------------------------------

EnsembleSumLayer::EnsembleSumLayer(std::vector<LayerStack> branches)
    : branches_(std::move(branches)) {
    if (branches_.empty()) throw DimensionError("EnsembleSumLayer: no branches");
    in_ = branches_.front().front()->input_dim();
    out_ = branches_.front().back()->output_dim();
    for (const auto& b : branches_) {
        if (b.front()->input_dim() != in_ || b.back()->output_dim() != out_) {
            throw DimensionError("EnsembleSumLayer: branches disagree on dims");
        }
    }
    params_ = RealVector::Zero(branches_.size() + 1);
    params_.head(branches_.size()).setConstant(1.0 / static_cast<double>(branches_.size()));
}

void EnsembleSumLayer::collect(std::vector<Layer*>& out) {
    out.push_back(this);
    for (auto& b : branches_) {
        for (auto& l : b) l->collect(out);
    }
}

RealVector EnsembleSumLayer::forward(const RealVector& x, TapeNode& tape,
                                     const ExecContext& ctx) const {
    require_dim(x, in_, "EnsembleSum input");
    tape.children.resize(branches_.size());
    RealVector y = RealVector::Constant(out_, params_[branches_.size()]);
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        y += params_[i] * ad::forward_stack(branches_[i], x, tape.children[i], ctx);
    }
    record(tape, x, params_, y);
    return y;
}

RealVector EnsembleSumLayer::vjp(const TapeNode& tape, const RealVector& g_out, GradientSet& grads,
                                 const ExecContext& ctx) const {
    check_tape(tape, "EnsembleSum");
    const std::size_t nb = branches_.size();
    RealVector g_p = RealVector::Zero(nb + 1);
    RealVector g_x = RealVector::Zero(in_);
    for (std::size_t i = 0; i < nb; ++i) {
        const RealVector& branch_out = tape.children[i].back().output;
        g_p[i] = g_out.dot(branch_out);
        RealVector g_branch = tape.params[i] * g_out;
        g_x += ad::backprop_stack(branches_[i], tape.children[i], g_branch, grads, ctx);
    }
    g_p[nb] = g_out.sum();
    grads.accumulate(registry_index, g_p);
    return g_x;
}

}  // namespace pat::nn
