#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "segshield/tensor.hpp"

namespace segshield::numcore {

// The seven primitive ops. Everything the reference model and the attack
// losses need composes from these.
enum class OpKind {
  Conv2dSame,  // (x[Ci,H,W], w[Co,Ci,kh,kw]) -> [Co,H,W], zero padding, odd kernels
  Relu,        // elementwise
  Sigmoid,     // elementwise
  AddBias,     // (x[C,H,W], b[C]) -> [C,H,W]
  Subtract,    // (a, b) same dims
  Square,      // elementwise
  Sum          // any dims -> [1]
};

const char* op_name(OpKind op);

using NamedTensors = std::map<std::string, Tensor>;

// Static DAG of primitive ops. Node inputs refer to earlier nodes or to graph
// inputs by name, so list order is a topological order by construction.
// Immutable once built; forward/backward allocate per-call state and the same
// graph can be evaluated from many threads.
class Graph {
 public:
  void add_input(const std::string& name);
  void add_node(const std::string& name, OpKind op, const std::vector<std::string>& args);

  bool has_input(const std::string& name) const;
  bool has_node(const std::string& name) const;
  const std::vector<std::string>& inputs() const { return inputs_; }

  struct Node {
    std::string name;
    OpKind op;
    std::vector<int> args;  // negative: ~input_index, non-negative: node index
  };
  const std::vector<Node>& nodes() const { return nodes_; }
  int node_index(const std::string& name) const;  // -1 if absent
  int input_index(const std::string& name) const;

 private:
  std::vector<std::string> inputs_;
  std::vector<Node> nodes_;
  std::map<std::string, int> node_by_name_;
  std::map<std::string, int> input_by_name_;
};

// Forward evaluation with all intermediates retained for backward.
class ForwardPass {
 public:
  ForwardPass(const Graph& graph, const NamedTensors& inputs);

  const Tensor& value(const std::string& name) const;  // node or input
  const Graph& graph() const { return *graph_; }
  const Tensor& input_value(int input_index) const { return inputs_[static_cast<std::size_t>(input_index)]; }
  const Tensor& node_value(int node_index) const { return values_[static_cast<std::size_t>(node_index)]; }

 private:
  const Graph* graph_;
  std::vector<Tensor> inputs_;
  std::vector<Tensor> values_;
};

// Named node outputs for the given bound inputs. Pure: identical inputs give
// bit-identical outputs.
NamedTensors forward(const Graph& graph, const NamedTensors& inputs);

// Reverse-mode vector-Jacobian product seeded at `output` with `cotangent`.
// Returns gradients for graph inputs; when `wanted` is non-null only those
// names are materialized (leaf accumulation for the rest is skipped).
NamedTensors backward(const ForwardPass& fp, const std::string& output, const Tensor& cotangent,
                      const std::set<std::string>* wanted = nullptr);

// d(loss)/d(wrt) for a scalar loss node. Errors: non-scalar loss, unknown name.
Tensor input_gradient(const Graph& graph, const NamedTensors& inputs, const std::string& loss_output,
                      const std::string& wrt);

}  // namespace segshield::numcore
