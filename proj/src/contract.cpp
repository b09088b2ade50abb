#include "holant/contract.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <string>

namespace holant {

namespace {

struct Work {
  std::vector<int> labels;
  std::vector<Complex> data;
};

std::size_t ipow(int q, std::size_t n) {
  std::size_t r = 1;
  for (std::size_t k = 0; k < n; ++k) r *= static_cast<std::size_t>(q);
  return r;
}

// out[o] = sum over `summed` of src[...], where every slot of src reads the
// value of its label. Handles repeated labels (traces) and permutations.
Work gather(const std::vector<int>& src_labels, std::span<const Complex> src, int q,
            const std::vector<int>& out_labels) {
  std::vector<int> summed;
  for (int l : src_labels) {
    if (std::find(out_labels.begin(), out_labels.end(), l) == out_labels.end() &&
        std::find(summed.begin(), summed.end(), l) == summed.end()) {
      summed.push_back(l);
    }
  }
  std::vector<int> all = out_labels;
  all.insert(all.end(), summed.begin(), summed.end());
  // stride_of[k]: contribution of variable k to the source flat index.
  std::vector<std::size_t> stride_of(all.size(), 0);
  {
    std::size_t s = 1;
    for (std::size_t slot = src_labels.size(); slot-- > 0;) {
      const auto it = std::find(all.begin(), all.end(), src_labels[slot]);
      stride_of[static_cast<std::size_t>(it - all.begin())] += s;
      s *= static_cast<std::size_t>(q);
    }
  }
  Work w;
  w.labels = out_labels;
  const std::size_t out_size = ipow(q, out_labels.size());
  const std::size_t sum_size = ipow(q, summed.size());
  w.data.assign(out_size, Complex{});
  std::vector<int> idx(all.size(), 0);
  std::size_t flat = 0;
  const std::size_t nout = out_labels.size();
  for (std::size_t o = 0; o < out_size; ++o) {
    Complex acc{};
    for (std::size_t s = 0; s < sum_size; ++s) {
      acc += src[flat];
      for (std::size_t k = all.size(); k-- > nout;) {
        flat += stride_of[k];
        if (++idx[k] < q) goto next_sum;
        flat -= stride_of[k] * static_cast<std::size_t>(q);
        idx[k] = 0;
      }
    next_sum:;
    }
    w.data[o] = acc;
    for (std::size_t k = nout; k-- > 0;) {
      flat += stride_of[k];
      if (++idx[k] < q) break;
      flat -= stride_of[k] * static_cast<std::size_t>(q);
      idx[k] = 0;
    }
  }
  return w;
}

std::vector<int> unique_labels(const std::vector<int>& labels) {
  std::map<int, int> count;
  for (int l : labels) ++count[l];
  std::vector<int> out;
  for (int l : labels) {
    if (count[l] == 1) out.push_back(l);
  }
  return out;
}

std::vector<int> shared_labels(const Work& a, const Work& b) {
  std::vector<int> s;
  for (int l : a.labels) {
    if (std::find(b.labels.begin(), b.labels.end(), l) != b.labels.end()) s.push_back(l);
  }
  return s;
}

Work contract_pair(const Work& a, const Work& b, int q) {
  const auto shared = shared_labels(a, b);
  std::vector<int> fa, fb;
  for (int l : a.labels) {
    if (std::find(shared.begin(), shared.end(), l) == shared.end()) fa.push_back(l);
  }
  for (int l : b.labels) {
    if (std::find(shared.begin(), shared.end(), l) == shared.end()) fb.push_back(l);
  }
  std::vector<int> a_order = fa;
  a_order.insert(a_order.end(), shared.begin(), shared.end());
  std::vector<int> b_order = shared;
  b_order.insert(b_order.end(), fb.begin(), fb.end());
  const Work pa = gather(a.labels, a.data, q, a_order);
  const Work pb = gather(b.labels, b.data, q, b_order);
  const auto m = static_cast<Eigen::Index>(ipow(q, fa.size()));
  const auto k = static_cast<Eigen::Index>(ipow(q, shared.size()));
  const auto n = static_cast<Eigen::Index>(ipow(q, fb.size()));
  using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> ma(pa.data.data(), m, k);
  Eigen::Map<const RowMat> mb(pb.data.data(), k, n);
  Work out;
  out.labels = fa;
  out.labels.insert(out.labels.end(), fb.begin(), fb.end());
  out.data.resize(static_cast<std::size_t>(m * n));
  Eigen::Map<RowMat> mc(out.data.data(), m, n);
  mc.noalias() = ma * mb;
  return out;
}

void check_open(const TensorNetwork& net) {
  std::map<int, int> count;
  for (const auto& node : net.nodes) {
    if (node.tensor == nullptr) throw HolantError("tensor network node without a tensor");
    if (node.tensor->q() != net.q) throw HolantError("tensor network mixes domain sizes");
    if (static_cast<int>(node.labels.size()) != node.tensor->arity()) {
      throw HolantError("tensor network node label count does not match its arity");
    }
    for (int l : node.labels) ++count[l];
  }
  std::vector<int> open;
  for (const auto& [l, c] : count) {
    if (c > 2) throw HolantError("label " + std::to_string(l) + " used more than twice");
    if (c == 1) open.push_back(l);
  }
  std::vector<int> declared = net.open;
  std::sort(declared.begin(), declared.end());
  if (declared != open) throw HolantError("open labels of the network do not match its output order");
}

}  // namespace

std::vector<Complex> contract_network(const TensorNetwork& net, const ContractOptions& opts,
                                      ContractStats* stats) {
  check_open(net);
  const int q = net.q;
  std::vector<Work> live;
  live.reserve(net.nodes.size());
  auto note_size = [&](std::size_t size) {
    if (size > opts.max_intermediate) {
      throw HolantError("contraction intermediate of " + std::to_string(size) +
                        " entries exceeds the cap of " + std::to_string(opts.max_intermediate));
    }
    if (stats) stats->largest_intermediate = std::max(stats->largest_intermediate, size);
  };
  for (const auto& node : net.nodes) {
    auto labels = unique_labels(node.labels);
    if (labels.size() == node.labels.size()) {
      live.push_back({node.labels, {node.tensor->entries().begin(), node.tensor->entries().end()}});
    } else {
      live.push_back(gather(node.labels, node.tensor->entries(), q, labels));
    }
    note_size(live.back().data.size());
  }

  while (true) {
    std::size_t best_i = 0, best_j = 0;
    bool found = false;
    std::size_t best_size = 0;
    for (std::size_t i = 0; i < live.size(); ++i) {
      for (std::size_t j = i + 1; j < live.size(); ++j) {
        const auto s = shared_labels(live[i], live[j]).size();
        if (s == 0) continue;
        const std::size_t rank = live[i].labels.size() + live[j].labels.size() - 2 * s;
        const std::size_t size = ipow(q, rank);
        if (!found || size < best_size) {
          found = true;
          best_size = size;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (!found) break;
    note_size(best_size);
    live[best_i] = contract_pair(live[best_i], live[best_j], q);
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(best_j));
    if (stats) ++stats->pairwise_steps;
  }

  // Remaining tensors are disconnected from each other.
  Work acc{{}, {net.scale}};
  for (const auto& w : live) {
    note_size(acc.data.size() * w.data.size());
    acc = contract_pair(acc, w, q);
  }
  return gather(acc.labels, acc.data, q, net.open).data;
}

std::vector<Complex> brute_force_network(const TensorNetwork& net) {
  check_open(net);
  const int q = net.q;
  std::map<int, int> var_of;  // label -> variable id
  std::vector<int> internal;
  for (int l : net.open) var_of[l] = static_cast<int>(var_of.size());
  for (const auto& node : net.nodes) {
    for (int l : node.labels) {
      if (!var_of.count(l)) {
        var_of[l] = static_cast<int>(var_of.size());
        internal.push_back(l);
      }
    }
  }
  const std::size_t nopen = net.open.size();
  const std::size_t nvars = var_of.size();

  // complete_at[k]: nodes whose last internal variable is the k-th internal
  // variable (k = 0 means no internal variables at all).
  std::vector<std::vector<std::size_t>> complete_at(internal.size() + 1);
  std::vector<std::vector<std::pair<int, std::size_t>>> node_vars(net.nodes.size());
  for (std::size_t n = 0; n < net.nodes.size(); ++n) {
    const auto& node = net.nodes[n];
    std::size_t stride = 1;
    std::size_t last = 0;
    for (std::size_t slot = node.labels.size(); slot-- > 0;) {
      const int v = var_of[node.labels[slot]];
      node_vars[n].push_back({v, stride});
      stride *= static_cast<std::size_t>(q);
      if (v >= static_cast<int>(nopen)) last = std::max(last, static_cast<std::size_t>(v) - nopen + 1);
    }
    complete_at[last].push_back(n);
  }

  std::vector<int> value(nvars, 0);
  auto node_value = [&](std::size_t n) {
    std::size_t flat = 0;
    for (const auto& [v, s] : node_vars[n]) flat += static_cast<std::size_t>(value[static_cast<std::size_t>(v)]) * s;
    return (*net.nodes[n].tensor)[flat];
  };

  std::function<Complex(std::size_t, Complex)> dfs = [&](std::size_t k, Complex partial) -> Complex {
    if (k == internal.size()) return partial;
    Complex total{};
    const std::size_t var = nopen + k;
    for (int x = 0; x < q; ++x) {
      value[var] = x;
      Complex p = partial;
      for (std::size_t n : complete_at[k + 1]) {
        p *= node_value(n);
        if (p == Complex{}) break;
      }
      if (p != Complex{}) total += dfs(k + 1, p);
    }
    return total;
  };

  const std::size_t out_size = ipow(q, nopen);
  std::vector<Complex> out(out_size);
  for (std::size_t o = 0; o < out_size; ++o) {
    std::size_t rem = o;
    for (std::size_t k = nopen; k-- > 0;) {
      value[k] = static_cast<int>(rem % static_cast<std::size_t>(q));
      rem /= static_cast<std::size_t>(q);
    }
    Complex p = net.scale;
    for (std::size_t n : complete_at[0]) p *= node_value(n);
    out[o] = (p == Complex{}) ? Complex{} : dfs(0, p);
  }
  return out;
}

}  // namespace holant
