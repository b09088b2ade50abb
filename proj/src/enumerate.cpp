#include "holant/enumerate.hpp"

#include <algorithm>
#include <set>

namespace holant {

std::vector<SigSlot> slots_of(const SignatureSet& sigs) {
  std::vector<SigSlot> out;
  for (const auto& e : sigs) out.push_back({e.name, e.tensor.shape()});
  return out;
}

namespace {

// A grid is a bijection from "L objects" (vertex contravariant ports, then
// right terminals) to "R objects" (vertex covariant ports, then left
// terminals). A left terminal stands where a covariant port would be, and a
// right terminal where a contravariant one would be.
struct Obj {
  int vertex = -1;  // -1 for a terminal
  int index = 0;    // port index within its side, or terminal index
};

class Enumerator {
 public:
  Enumerator(int q, const std::vector<SigSlot>& sigs, Shape profile, bool closed_mode, const GridVisitor& visit,
             const EnumerateOptions& opts)
      : q_(q), sigs_(sigs), profile_(profile), closed_mode_(closed_mode), visit_(visit), opts_(opts) {}

  std::size_t run(int max_vertices) {
    if (max_vertices < 0) throw HolantError("max_vertices must be non-negative");
    std::vector<int> counts(sigs_.size(), 0);
    for (int n = 0; n <= max_vertices && !stopped_; ++n) multisets(counts, 0, n);
    return visited_;
  }

 private:
  void multisets(std::vector<int>& counts, std::size_t cls, int remaining) {
    if (stopped_) return;
    if (cls == sigs_.size()) {
      if (remaining == 0) enumerate_multiset(counts);
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[cls] = c;
      multisets(counts, cls + 1, remaining - c);
      if (stopped_) return;
    }
    counts[cls] = 0;
  }

  void enumerate_multiset(const std::vector<int>& counts) {
    long lsum = profile_.right, rsum = profile_.left;
    for (std::size_t c = 0; c < sigs_.size(); ++c) {
      lsum += static_cast<long>(counts[c]) * sigs_[c].shape.left;
      rsum += static_cast<long>(counts[c]) * sigs_[c].shape.right;
    }
    if (lsum != rsum) return;

    cls_of_.clear();
    class_start_.assign(sigs_.size() + 1, 0);
    for (std::size_t c = 0; c < sigs_.size(); ++c) {
      class_start_[c] = static_cast<int>(cls_of_.size());
      for (int k = 0; k < counts[c]; ++k) cls_of_.push_back(static_cast<int>(c));
    }
    class_start_[sigs_.size()] = static_cast<int>(cls_of_.size());
    const auto nv = cls_of_.size();
    lobj_.clear();
    robj_.clear();
    loff_.assign(nv, 0);
    roff_.assign(nv, 0);
    for (std::size_t v = 0; v < nv; ++v) {
      loff_[v] = static_cast<int>(lobj_.size());
      for (int i = 0; i < shape_of(v).left; ++i) lobj_.push_back({static_cast<int>(v), i});
    }
    for (int t = 0; t < profile_.right; ++t) lobj_.push_back({-1, t});
    for (std::size_t v = 0; v < nv; ++v) {
      roff_[v] = static_cast<int>(robj_.size());
      for (int j = 0; j < shape_of(v).right; ++j) robj_.push_back({static_cast<int>(v), j});
    }
    for (int t = 0; t < profile_.left; ++t) robj_.push_back({-1, t});

    bij_.assign(lobj_.size(), -1);
    used_.assign(robj_.size(), false);
    touched_.assign(nv, false);
    seen_.clear();
    dfs(0);
  }

  Shape shape_of(std::size_t v) const { return sigs_[static_cast<std::size_t>(cls_of_[v])].shape; }

  bool first_untouched_of_class(int u) const {
    const int c = cls_of_[static_cast<std::size_t>(u)];
    for (int w = class_start_[static_cast<std::size_t>(c)]; w < u; ++w) {
      if (!touched_[static_cast<std::size_t>(w)]) return false;
    }
    return true;
  }

  void dfs(std::size_t l) {
    if (stopped_) return;
    if (l == lobj_.size()) {
      emit();
      return;
    }
    const Obj& lo = lobj_[l];
    bool marked_self = false;
    if (lo.vertex >= 0 && !touched_[static_cast<std::size_t>(lo.vertex)]) {
      touched_[static_cast<std::size_t>(lo.vertex)] = true;
      marked_self = true;
    }
    for (std::size_t r = 0; r < robj_.size() && !stopped_; ++r) {
      if (used_[r]) continue;
      const Obj& ro = robj_[r];
      bool marked = false;
      if (ro.vertex >= 0 && !touched_[static_cast<std::size_t>(ro.vertex)]) {
        if (!first_untouched_of_class(ro.vertex)) continue;
        touched_[static_cast<std::size_t>(ro.vertex)] = true;
        marked = true;
      }
      used_[r] = true;
      bij_[l] = static_cast<int>(r);
      dfs(l + 1);
      used_[r] = false;
      if (marked) touched_[static_cast<std::size_t>(ro.vertex)] = false;
    }
    if (marked_self) touched_[static_cast<std::size_t>(lo.vertex)] = false;
  }

  // Lexicographically least relabelled bijection over class-preserving
  // vertex permutations.
  std::vector<int> canonical_code() {
    const auto nv = cls_of_.size();
    std::vector<int> perm(nv);
    for (std::size_t v = 0; v < nv; ++v) perm[v] = static_cast<int>(v);
    std::vector<int> best;
    std::vector<int> code(lobj_.size());
    std::function<void(std::size_t)> rec = [&](std::size_t c) {
      if (c == sigs_.size()) {
        for (std::size_t l = 0; l < lobj_.size(); ++l) {
          const Obj& lo = lobj_[l];
          const std::size_t nl =
              lo.vertex >= 0 ? static_cast<std::size_t>(loff_[static_cast<std::size_t>(perm[static_cast<std::size_t>(lo.vertex)])] + lo.index) : l;
          const Obj& ro = robj_[static_cast<std::size_t>(bij_[l])];
          code[nl] = ro.vertex >= 0 ? roff_[static_cast<std::size_t>(perm[static_cast<std::size_t>(ro.vertex)])] + ro.index
                                    : bij_[l];
        }
        if (best.empty() || code < best) best = code;
        return;
      }
      auto b = perm.begin() + class_start_[c];
      auto e = perm.begin() + class_start_[c + 1];
      do {
        rec(c + 1);
      } while (std::next_permutation(b, e));
    };
    rec(0);
    return best;
  }

  void emit() {
    if (!seen_.insert(canonical_code()).second) return;
    SignatureGrid g = build();
    if (!closed_mode_ && !(profile_ == Shape{0, 0}) && has_closed_component(g)) return;
    deliver(g);
    if (closed_mode_ && !stopped_) {
      g.loops = 1;
      deliver(g);
    }
  }

  void deliver(const SignatureGrid& g) {
    if (visited_ >= opts_.max_results) {
      throw HolantError("enumeration exceeded " + std::to_string(opts_.max_results) + " grids");
    }
    ++visited_;
    if (!visit_(g)) stopped_ = true;
  }

  SignatureGrid build() const {
    SignatureGrid g;
    g.q = q_;
    for (std::size_t v = 0; v < cls_of_.size(); ++v) {
      const auto& s = sigs_[static_cast<std::size_t>(cls_of_[v])];
      g.add_vertex(s.name, s.shape);
    }
    g.left_dangling.assign(static_cast<std::size_t>(profile_.left), Stub{});
    g.right_dangling.assign(static_cast<std::size_t>(profile_.right), Stub{});
    for (std::size_t l = 0; l < lobj_.size(); ++l) {
      const Obj& lo = lobj_[l];
      const Obj& ro = robj_[static_cast<std::size_t>(bij_[l])];
      if (lo.vertex >= 0 && ro.vertex >= 0) {
        const int ro_port = shape_of(static_cast<std::size_t>(ro.vertex)).left + ro.index + 1;
        g.edges.push_back({{lo.vertex, lo.index + 1}, {ro.vertex, ro_port}});
      } else if (lo.vertex >= 0) {
        g.left_dangling[static_cast<std::size_t>(ro.index)] = Stub::at(lo.vertex, lo.index + 1);
      } else if (ro.vertex >= 0) {
        const int ro_port = shape_of(static_cast<std::size_t>(ro.vertex)).left + ro.index + 1;
        g.right_dangling[static_cast<std::size_t>(lo.index)] = Stub::at(ro.vertex, ro_port);
      } else {
        const int w = g.wires++;
        g.left_dangling[static_cast<std::size_t>(ro.index)] = Stub::of_wire(w);
        g.right_dangling[static_cast<std::size_t>(lo.index)] = Stub::of_wire(w);
      }
    }
    return g;
  }

  int q_;
  const std::vector<SigSlot>& sigs_;
  Shape profile_;
  bool closed_mode_;
  const GridVisitor& visit_;
  EnumerateOptions opts_;

  std::vector<int> cls_of_, class_start_;
  std::vector<Obj> lobj_, robj_;
  std::vector<int> loff_, roff_;
  std::vector<int> bij_;
  std::vector<bool> used_, touched_;
  std::set<std::vector<int>> seen_;
  std::size_t visited_ = 0;
  bool stopped_ = false;
};

std::vector<SignatureGrid> collect(const std::function<std::size_t(const GridVisitor&)>& run) {
  std::vector<SignatureGrid> out;
  run([&](const SignatureGrid& g) {
    out.push_back(g);
    return true;
  });
  return out;
}

}  // namespace

std::size_t enumerate_grids(int q, const std::vector<SigSlot>& sigs, int max_vertices, const GridVisitor& visit,
                            const EnumerateOptions& opts) {
  return Enumerator(q, sigs, {0, 0}, true, visit, opts).run(max_vertices);
}

std::vector<SignatureGrid> enumerate_grids(int q, const std::vector<SigSlot>& sigs, int max_vertices,
                                           const EnumerateOptions& opts) {
  return collect([&](const GridVisitor& v) { return enumerate_grids(q, sigs, max_vertices, v, opts); });
}

std::size_t enumerate_gadgets(int q, const std::vector<SigSlot>& sigs, Shape profile, int max_vertices,
                              const GridVisitor& visit, const EnumerateOptions& opts) {
  if (profile.left < 0 || profile.right < 0) throw HolantError("negative gadget profile");
  return Enumerator(q, sigs, profile, false, visit, opts).run(max_vertices);
}

std::vector<SignatureGrid> enumerate_gadgets(int q, const std::vector<SigSlot>& sigs, Shape profile,
                                             int max_vertices, const EnumerateOptions& opts) {
  return collect([&](const GridVisitor& v) { return enumerate_gadgets(q, sigs, profile, max_vertices, v, opts); });
}

}  // namespace holant
