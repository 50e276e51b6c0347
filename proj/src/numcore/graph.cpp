// Forward evaluation and reverse-mode differentiation over the seven
// primitive ops. Reductions accumulate in 64-bit and store in 32-bit;
// sigmoid derivatives are recomputed in 64-bit from the retained
// pre-activation so saturated outputs keep a usable gradient sign.

#include "segshield/graph.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace segshield::numcore {

namespace {

[[noreturn]] void shape_error(const std::string& node, const std::string& expected, const std::string& got) {
  throw std::runtime_error("shape mismatch at node '" + node + "': expected " + expected + ", got " + got);
}

void require_conv_shapes(const std::string& node, const Tensor& x, const Tensor& w) {
  if (x.dims.size() != 3) shape_error(node, "conv input [Ci,H,W]", dims_str(x.dims));
  if (w.dims.size() != 4) shape_error(node, "conv weight [Co,Ci,kh,kw]", dims_str(w.dims));
  if (w.dims[1] != x.dims[0])
    shape_error(node, "weight Ci=" + std::to_string(x.dims[0]), dims_str(w.dims));
  if (w.dims[2] % 2 == 0 || w.dims[3] % 2 == 0)
    shape_error(node, "odd kernel dims", dims_str(w.dims));
}

// adds w0*row[x-1] + w1*row[x] + w2*row[x+1] into acc over the full row,
// with the zero-padded borders handled outside the main loop
inline void fma_row3(double* __restrict__ acc, const float* __restrict__ row, int wd, float w0,
                     float w1, float w2) {
  acc[0] += static_cast<double>(w1) * row[0] + static_cast<double>(w2) * row[1];
  for (int x = 1; x < wd - 1; ++x) {
    acc[x] += static_cast<double>(w0) * row[x - 1] + static_cast<double>(w1) * row[x] +
              static_cast<double>(w2) * row[x + 1];
  }
  acc[wd - 1] += static_cast<double>(w0) * row[wd - 2] + static_cast<double>(w1) * row[wd - 1];
}

Tensor conv2d_same(const std::string& node, const Tensor& x, const Tensor& w) {
  require_conv_shapes(node, x, w);
  const int ci_n = x.dims[0], h = x.dims[1], wd = x.dims[2];
  const int co_n = w.dims[0], kh = w.dims[2], kw = w.dims[3];
  const int py = kh / 2, px = kw / 2;
  Tensor out = Tensor::zeros({co_n, h, wd});
  std::vector<double> acc(static_cast<std::size_t>(wd));

  const bool fast3 = kh == 3 && kw == 3 && wd >= 2;
  for (int co = 0; co < co_n; ++co) {
    for (int y = 0; y < h; ++y) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int ci = 0; ci < ci_n; ++ci) {
        for (int ky = 0; ky < kh; ++ky) {
          const int iy = y + ky - py;
          if (iy < 0 || iy >= h) continue;
          const float* xrow = &x.data[(static_cast<std::size_t>(ci) * h + iy) * wd];
          const float* wrow = &w.data[((static_cast<std::size_t>(co) * ci_n + ci) * kh + ky) * kw];
          if (fast3) {
            fma_row3(acc.data(), xrow, wd, wrow[0], wrow[1], wrow[2]);
            continue;
          }
          for (int kx = 0; kx < kw; ++kx) {
            const double wgt = wrow[kx];
            const int dx = kx - px;
            const int x0 = dx < 0 ? -dx : 0;
            const int x1 = dx > 0 ? wd - dx : wd;
            const float* xs = xrow + dx;
            for (int ox = x0; ox < x1; ++ox) acc[static_cast<std::size_t>(ox)] += wgt * xs[ox];
          }
        }
      }
      float* orow = &out.data[(static_cast<std::size_t>(co) * h + y) * wd];
      for (int ox = 0; ox < wd; ++ox) orow[ox] = static_cast<float>(acc[static_cast<std::size_t>(ox)]);
    }
  }
  return out;
}

// dx[ci,iy,ix] = sum_{co,ky,kx} dout[co, iy-ky+py, ix-kx+px] * w[co,ci,ky,kx]
Tensor conv2d_same_dx(const Tensor& x, const Tensor& w, const Tensor& dout) {
  const int ci_n = x.dims[0], h = x.dims[1], wd = x.dims[2];
  const int co_n = w.dims[0], kh = w.dims[2], kw = w.dims[3];
  const int py = kh / 2, px = kw / 2;
  Tensor dx = Tensor::zeros(x.dims);
  std::vector<double> acc(static_cast<std::size_t>(wd));
  const bool fast3 = kh == 3 && kw == 3 && wd >= 2;
  for (int ci = 0; ci < ci_n; ++ci) {
    for (int iy = 0; iy < h; ++iy) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int co = 0; co < co_n; ++co) {
        for (int ky = 0; ky < kh; ++ky) {
          const int oy = iy - ky + py;
          if (oy < 0 || oy >= h) continue;
          const float* drow = &dout.data[(static_cast<std::size_t>(co) * h + oy) * wd];
          const float* wrow = &w.data[((static_cast<std::size_t>(co) * ci_n + ci) * kh + ky) * kw];
          if (fast3) {
            // ox = ix - kx + 1, so the kernel reads mirrored
            fma_row3(acc.data(), drow, wd, wrow[2], wrow[1], wrow[0]);
            continue;
          }
          for (int kx = 0; kx < kw; ++kx) {
            const double wgt = wrow[kx];
            const int dxo = px - kx;  // ox = ix + dxo
            const int x0 = dxo < 0 ? -dxo : 0;
            const int x1 = dxo > 0 ? wd - dxo : wd;
            const float* ds = drow + dxo;
            for (int ix = x0; ix < x1; ++ix) acc[static_cast<std::size_t>(ix)] += wgt * ds[ix];
          }
        }
      }
      float* grow = &dx.data[(static_cast<std::size_t>(ci) * h + iy) * wd];
      for (int ix = 0; ix < wd; ++ix) grow[ix] = static_cast<float>(acc[static_cast<std::size_t>(ix)]);
    }
  }
  return dx;
}

// dw[co,ci,ky,kx] = sum_{oy,ox} dout[co,oy,ox] * x[ci, oy+ky-py, ox+kx-px]
Tensor conv2d_same_dw(const Tensor& x, const Tensor& w, const Tensor& dout) {
  const int ci_n = x.dims[0], h = x.dims[1], wd = x.dims[2];
  const int co_n = w.dims[0], kh = w.dims[2], kw = w.dims[3];
  const int py = kh / 2, px = kw / 2;
  Tensor dw = Tensor::zeros(w.dims);
  if (kh == 3 && kw == 3 && wd >= 2) {
    for (int co = 0; co < co_n; ++co) {
      for (int ci = 0; ci < ci_n; ++ci) {
        double acc[3][3] = {};
        for (int oy = 0; oy < h; ++oy) {
          const float* __restrict__ drow = &dout.data[(static_cast<std::size_t>(co) * h + oy) * wd];
          for (int ky = 0; ky < 3; ++ky) {
            const int iy = oy + ky - 1;
            if (iy < 0 || iy >= h) continue;
            const float* __restrict__ xrow = &x.data[(static_cast<std::size_t>(ci) * h + iy) * wd];
            double a0 = 0.0, a1 = 0.0, a2 = 0.0;
            for (int ox = 1; ox < wd - 1; ++ox) {
              const double dv = drow[ox];
              a0 += dv * xrow[ox - 1];
              a1 += dv * xrow[ox];
              a2 += dv * xrow[ox + 1];
            }
            a1 += static_cast<double>(drow[0]) * xrow[0];
            a2 += static_cast<double>(drow[0]) * xrow[1];
            a0 += static_cast<double>(drow[wd - 1]) * xrow[wd - 2];
            a1 += static_cast<double>(drow[wd - 1]) * xrow[wd - 1];
            acc[ky][0] += a0;
            acc[ky][1] += a1;
            acc[ky][2] += a2;
          }
        }
        float* wslot = &dw.data[(static_cast<std::size_t>(co) * ci_n + ci) * 9];
        for (int ky = 0; ky < 3; ++ky)
          for (int kx = 0; kx < 3; ++kx) wslot[ky * 3 + kx] = static_cast<float>(acc[ky][kx]);
      }
    }
    return dw;
  }
  for (int co = 0; co < co_n; ++co) {
    for (int ci = 0; ci < ci_n; ++ci) {
      for (int ky = 0; ky < kh; ++ky) {
        const int oy0 = std::max(0, py - ky);
        const int oy1 = std::min(h, h + py - ky);
        for (int kx = 0; kx < kw; ++kx) {
          const int dx = kx - px;
          const int ox0 = dx < 0 ? -dx : 0;
          const int ox1 = dx > 0 ? wd - dx : wd;
          double acc = 0.0;
          for (int oy = oy0; oy < oy1; ++oy) {
            const float* drow = &dout.data[(static_cast<std::size_t>(co) * h + oy) * wd];
            const float* xrow = &x.data[(static_cast<std::size_t>(ci) * h + (oy + ky - py)) * wd] + dx;
            for (int ox = ox0; ox < ox1; ++ox) acc += static_cast<double>(drow[ox]) * xrow[ox];
          }
          dw.data[((static_cast<std::size_t>(co) * ci_n + ci) * kh + ky) * kw + kx] = static_cast<float>(acc);
        }
      }
    }
  }
  return dw;
}

double sigmoid64(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

const char* op_name(OpKind op) {
  switch (op) {
    case OpKind::Conv2dSame: return "conv2d-same";
    case OpKind::Relu: return "relu";
    case OpKind::Sigmoid: return "sigmoid";
    case OpKind::AddBias: return "add-bias";
    case OpKind::Subtract: return "elementwise-subtract";
    case OpKind::Square: return "square";
    case OpKind::Sum: return "sum";
  }
  return "?";
}

static int op_arity(OpKind op) {
  switch (op) {
    case OpKind::Conv2dSame:
    case OpKind::AddBias:
    case OpKind::Subtract: return 2;
    default: return 1;
  }
}

void Graph::add_input(const std::string& name) {
  if (has_input(name) || has_node(name)) throw std::invalid_argument("duplicate graph name '" + name + "'");
  input_by_name_[name] = static_cast<int>(inputs_.size());
  inputs_.push_back(name);
}

void Graph::add_node(const std::string& name, OpKind op, const std::vector<std::string>& args) {
  if (has_input(name) || has_node(name)) throw std::invalid_argument("duplicate graph name '" + name + "'");
  if (static_cast<int>(args.size()) != op_arity(op))
    throw std::invalid_argument(std::string("op ") + op_name(op) + " takes " +
                                std::to_string(op_arity(op)) + " args");
  Node node;
  node.name = name;
  node.op = op;
  for (const auto& arg : args) {
    if (auto it = node_by_name_.find(arg); it != node_by_name_.end()) {
      node.args.push_back(it->second);
    } else if (auto jt = input_by_name_.find(arg); jt != input_by_name_.end()) {
      node.args.push_back(~jt->second);
    } else {
      throw std::invalid_argument("node '" + name + "' references unknown '" + arg + "'");
    }
  }
  node_by_name_[name] = static_cast<int>(nodes_.size());
  nodes_.push_back(std::move(node));
}

bool Graph::has_input(const std::string& name) const { return input_by_name_.count(name) != 0; }
bool Graph::has_node(const std::string& name) const { return node_by_name_.count(name) != 0; }

int Graph::node_index(const std::string& name) const {
  auto it = node_by_name_.find(name);
  return it == node_by_name_.end() ? -1 : it->second;
}

int Graph::input_index(const std::string& name) const {
  auto it = input_by_name_.find(name);
  return it == input_by_name_.end() ? -1 : it->second;
}

ForwardPass::ForwardPass(const Graph& graph, const NamedTensors& inputs) : graph_(&graph) {
  inputs_.reserve(graph.inputs().size());
  for (const auto& name : graph.inputs()) {
    auto it = inputs.find(name);
    if (it == inputs.end()) throw std::runtime_error("unbound input '" + name + "'");
    inputs_.push_back(it->second);
  }
  values_.reserve(graph.nodes().size());
  for (const auto& node : graph.nodes()) {
    auto arg = [&](int i) -> const Tensor& {
      const int a = node.args[static_cast<std::size_t>(i)];
      return a < 0 ? inputs_[static_cast<std::size_t>(~a)] : values_[static_cast<std::size_t>(a)];
    };
    Tensor out;
    switch (node.op) {
      case OpKind::Conv2dSame:
        out = conv2d_same(node.name, arg(0), arg(1));
        break;
      case OpKind::Relu: {
        const Tensor& x = arg(0);
        out = Tensor::zeros(x.dims);
        for (std::size_t i = 0; i < x.data.size(); ++i) out.data[i] = x.data[i] > 0.0f ? x.data[i] : 0.0f;
        break;
      }
      case OpKind::Sigmoid: {
        const Tensor& x = arg(0);
        out = Tensor::zeros(x.dims);
        for (std::size_t i = 0; i < x.data.size(); ++i)
          out.data[i] = static_cast<float>(sigmoid64(x.data[i]));
        break;
      }
      case OpKind::AddBias: {
        const Tensor& x = arg(0);
        const Tensor& b = arg(1);
        if (x.dims.size() != 3 || b.dims.size() != 1 || b.dims[0] != x.dims[0])
          shape_error(node.name, "[C,H,W] plus bias [C]", dims_str(x.dims) + " + " + dims_str(b.dims));
        out = Tensor::zeros(x.dims);
        const std::size_t plane = static_cast<std::size_t>(x.dims[1]) * x.dims[2];
        for (int c = 0; c < x.dims[0]; ++c) {
          const float bc = b.data[static_cast<std::size_t>(c)];
          const float* xs = &x.data[c * plane];
          float* os = &out.data[c * plane];
          for (std::size_t i = 0; i < plane; ++i) os[i] = xs[i] + bc;
        }
        break;
      }
      case OpKind::Subtract: {
        const Tensor& a = arg(0);
        const Tensor& b = arg(1);
        if (!a.same_dims(b)) shape_error(node.name, dims_str(a.dims), dims_str(b.dims));
        out = Tensor::zeros(a.dims);
        for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = a.data[i] - b.data[i];
        break;
      }
      case OpKind::Square: {
        const Tensor& x = arg(0);
        out = Tensor::zeros(x.dims);
        for (std::size_t i = 0; i < x.data.size(); ++i) out.data[i] = x.data[i] * x.data[i];
        break;
      }
      case OpKind::Sum: {
        const Tensor& x = arg(0);
        double acc = 0.0;
        for (float v : x.data) acc += v;
        out = Tensor::scalar(static_cast<float>(acc));
        break;
      }
    }
    check_finite(out, "output of node '" + node.name + "'");
    values_.push_back(std::move(out));
  }
}

const Tensor& ForwardPass::value(const std::string& name) const {
  if (int ni = graph_->node_index(name); ni >= 0) return values_[static_cast<std::size_t>(ni)];
  if (int ii = graph_->input_index(name); ii >= 0) return inputs_[static_cast<std::size_t>(ii)];
  throw std::runtime_error("unknown name '" + name + "'");
}

NamedTensors forward(const Graph& graph, const NamedTensors& inputs) {
  ForwardPass fp(graph, inputs);
  NamedTensors out;
  for (const auto& node : graph.nodes()) out[node.name] = fp.value(node.name);
  return out;
}

NamedTensors backward(const ForwardPass& fp, const std::string& output, const Tensor& cotangent,
                      const std::set<std::string>* wanted) {
  const Graph& graph = fp.graph();
  const int out_node = graph.node_index(output);
  if (out_node < 0) throw std::runtime_error("unknown name '" + output + "'");
  if (!cotangent.same_dims(fp.node_value(out_node)))
    throw std::runtime_error("cotangent dims " + dims_str(cotangent.dims) + " do not match output " +
                             dims_str(fp.node_value(out_node).dims));

  const auto& nodes = graph.nodes();
  std::vector<std::optional<Tensor>> node_grads(nodes.size());
  std::vector<std::optional<Tensor>> input_grads(graph.inputs().size());
  node_grads[static_cast<std::size_t>(out_node)] = cotangent;

  auto want_input = [&](int idx) {
    return wanted == nullptr || wanted->count(graph.inputs()[static_cast<std::size_t>(idx)]) != 0;
  };
  auto accumulate = [](std::optional<Tensor>& slot, Tensor&& g) {
    if (!slot) {
      slot = std::move(g);
    } else {
      for (std::size_t i = 0; i < slot->data.size(); ++i) slot->data[i] += g.data[i];
    }
  };
  // Routes a computed arg-gradient to its node or input slot; `compute`
  // is only invoked when someone downstream needs the result.
  auto add_arg_grad = [&](int arg, auto&& compute) {
    if (arg < 0) {
      const int idx = ~arg;
      if (!want_input(idx)) return;
      accumulate(input_grads[static_cast<std::size_t>(idx)], compute());
    } else {
      accumulate(node_grads[static_cast<std::size_t>(arg)], compute());
    }
  };

  for (int ni = static_cast<int>(nodes.size()) - 1; ni >= 0; --ni) {
    auto& g_opt = node_grads[static_cast<std::size_t>(ni)];
    if (!g_opt) continue;
    const Tensor g = std::move(*g_opt);
    g_opt.reset();
    const auto& node = nodes[static_cast<std::size_t>(ni)];
    auto arg_value = [&](int i) -> const Tensor& {
      const int a = node.args[static_cast<std::size_t>(i)];
      return a < 0 ? fp.input_value(~a) : fp.node_value(a);
    };
    switch (node.op) {
      case OpKind::Conv2dSame: {
        const Tensor& x = arg_value(0);
        const Tensor& w = arg_value(1);
        add_arg_grad(node.args[0], [&] { return conv2d_same_dx(x, w, g); });
        add_arg_grad(node.args[1], [&] { return conv2d_same_dw(x, w, g); });
        break;
      }
      case OpKind::Relu: {
        const Tensor& x = arg_value(0);
        add_arg_grad(node.args[0], [&] {
          Tensor dx = Tensor::zeros(x.dims);
          for (std::size_t i = 0; i < x.data.size(); ++i) dx.data[i] = x.data[i] > 0.0f ? g.data[i] : 0.0f;
          return dx;
        });
        break;
      }
      case OpKind::Sigmoid: {
        const Tensor& x = arg_value(0);
        add_arg_grad(node.args[0], [&] {
          Tensor dx = Tensor::zeros(x.dims);
          for (std::size_t i = 0; i < x.data.size(); ++i) {
            const double s = sigmoid64(x.data[i]);
            dx.data[i] = static_cast<float>(static_cast<double>(g.data[i]) * s * (1.0 - s));
          }
          return dx;
        });
        break;
      }
      case OpKind::AddBias: {
        const Tensor& x = arg_value(0);
        add_arg_grad(node.args[0], [&] { return g; });
        add_arg_grad(node.args[1], [&] {
          Tensor db = Tensor::zeros({x.dims[0]});
          const std::size_t plane = static_cast<std::size_t>(x.dims[1]) * x.dims[2];
          for (int c = 0; c < x.dims[0]; ++c) {
            double acc = 0.0;
            const float* gs = &g.data[c * plane];
            for (std::size_t i = 0; i < plane; ++i) acc += gs[i];
            db.data[static_cast<std::size_t>(c)] = static_cast<float>(acc);
          }
          return db;
        });
        break;
      }
      case OpKind::Subtract: {
        add_arg_grad(node.args[0], [&] { return g; });
        add_arg_grad(node.args[1], [&] {
          Tensor db = Tensor::zeros(g.dims);
          for (std::size_t i = 0; i < g.data.size(); ++i) db.data[i] = -g.data[i];
          return db;
        });
        break;
      }
      case OpKind::Square: {
        const Tensor& x = arg_value(0);
        add_arg_grad(node.args[0], [&] {
          Tensor dx = Tensor::zeros(x.dims);
          for (std::size_t i = 0; i < x.data.size(); ++i)
            dx.data[i] = static_cast<float>(2.0 * static_cast<double>(x.data[i]) * g.data[i]);
          return dx;
        });
        break;
      }
      case OpKind::Sum: {
        const Tensor& x = arg_value(0);
        add_arg_grad(node.args[0], [&] { return Tensor::full(x.dims, g.data[0]); });
        break;
      }
    }
  }

  NamedTensors out;
  for (std::size_t i = 0; i < input_grads.size(); ++i) {
    const std::string& name = graph.inputs()[i];
    if (wanted != nullptr && wanted->count(name) == 0) continue;
    Tensor grad = input_grads[i] ? std::move(*input_grads[i]) : Tensor::zeros(fp.input_value(static_cast<int>(i)).dims);
    check_finite(grad, "gradient of '" + name + "'");
    out[name] = std::move(grad);
  }
  return out;
}

Tensor input_gradient(const Graph& graph, const NamedTensors& inputs, const std::string& loss_output,
                      const std::string& wrt) {
  if (!graph.has_input(wrt)) throw std::runtime_error("unknown name '" + wrt + "' (not a graph input)");
  ForwardPass fp(graph, inputs);
  const Tensor& loss = fp.value(loss_output);
  if (loss.dims != std::vector<int>{1})
    throw std::runtime_error("loss '" + loss_output + "' is not scalar: dims " + dims_str(loss.dims));
  const std::set<std::string> wanted{wrt};
  auto grads = backward(fp, loss_output, Tensor::scalar(1.0f), &wanted);
  return std::move(grads.at(wrt));
}

}  // namespace segshield::numcore
