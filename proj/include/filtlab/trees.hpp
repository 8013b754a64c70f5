#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "filtlab/errors.hpp"
#include "filtlab/iteration.hpp"
#include "filtlab/model.hpp"
#include "filtlab/transport.hpp"

namespace filtlab {

// Coupling classes for equipped trees, ordered from weakest to strongest
// constraint. markov_recursive minimizes transport cost level by level;
// automorphism_orbit minimizes over tree automorphisms (homogeneous trees
// only); iso_mixture only pairs children of equal mass and identical
// labelled structure, and may be infeasible (NoCoupling).
enum class TreeCouplingSemantics { MarkovRecursive, AutomorphismOrbit, IsoMixture };

inline const char* tree_semantics_name(TreeCouplingSemantics s) {
  switch (s) {
    case TreeCouplingSemantics::MarkovRecursive: return "markov_recursive";
    case TreeCouplingSemantics::AutomorphismOrbit: return "automorphism_orbit";
    case TreeCouplingSemantics::IsoMixture: return "iso_mixture";
  }
  return "?";
}

// A partition element of xi_n with its hierarchy of sub-partitions: the root
// is a level-n state, children carry cotransition masses, leaves are level-0
// states. Parallel Bratteli edges appear as separate equal-mass children.
template <class T>
struct EquippedTree {
  int level = 0;
  int state = 0;
  std::vector<std::pair<T, std::shared_ptr<const EquippedTree>>> children;
  std::size_t leaf_count = 1;

  bool is_leaf() const { return children.empty(); }
};

template <class T>
using TreePtr = std::shared_ptr<const EquippedTree<T>>;

template <class T>
TreePtr<T> build_tree(const MarkovModel<T>& model, std::size_t n, std::size_t a) {
  if (n > model.horizon()) throw Error(ErrorCode::HorizonExceeded, "tree level beyond horizon");
  std::vector<CotransitionKernel<T>> kernels;
  for (std::size_t k = 1; k <= n; ++k) kernels.push_back(cotransitions(model, k));
  if (n > 0 && !kernels[n - 1].supported[a])
    throw Error(ErrorCode::ZeroMassState, "tree rooted at a zero-mass state");
  if (n == 0 && level_marginal(model, 0).weights[a] == T(0))
    throw Error(ErrorCode::ZeroMassState, "tree rooted at a zero-mass state");

  std::map<std::pair<std::size_t, std::size_t>, TreePtr<T>> memo;
  auto rec = [&](auto&& self, std::size_t level, std::size_t state) -> TreePtr<T> {
    auto key = std::make_pair(level, state);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    auto node = std::make_shared<EquippedTree<T>>();
    node->level = static_cast<int>(level);
    node->state = static_cast<int>(state);
    if (level > 0) {
      const auto& q = kernels[level - 1];
      node->leaf_count = 0;
      for (std::size_t c = 0; c < q.rows.cols(); ++c) {
        const T& mass = q.rows(state, c);
        if (mass == T(0)) continue;
        long mult = model.multiplicity(level - 1, c, state);
        if (mult <= 0) mult = 1;
        TreePtr<T> child = self(self, level - 1, c);
        T edge_mass = mass / T(mult);
        for (long e = 0; e < mult; ++e) node->children.emplace_back(edge_mass, child);
        node->leaf_count += static_cast<std::size_t>(mult) * child->leaf_count;
      }
    }
    TreePtr<T> out = node;
    memo[key] = out;
    return out;
  };
  return rec(rec, n, a);
}

// Free-standing homogeneous r-ary tree with uniform masses (dyadic when r=2).
template <class T>
TreePtr<T> uniform_tree(std::size_t height, std::size_t arity = 2) {
  if (arity == 0) throw Error(ErrorCode::ShapeMismatch, "arity must be positive");
  TreePtr<T> cur;
  {
    auto leaf = std::make_shared<EquippedTree<T>>();
    leaf->level = 0;
    cur = leaf;
  }
  for (std::size_t h = 1; h <= height; ++h) {
    auto node = std::make_shared<EquippedTree<T>>();
    node->level = static_cast<int>(h);
    node->leaf_count = 0;
    for (std::size_t i = 0; i < arity; ++i) {
      node->children.emplace_back(T(1) / T(static_cast<long>(arity)), cur);
      node->leaf_count += cur->leaf_count;
    }
    cur = node;
  }
  return cur;
}

// --- canonical forms ---------------------------------------------------------

namespace detail {

template <class T>
struct canon_mass {
  using type = T;
  static type make(const T& x) { return x; }
  static std::string str(const type& x) { return scalar_str(x); }
};

// float masses are snapped to a 1e-12 grid before entering isomorphism keys
template <>
struct canon_mass<double> {
  using type = long long;
  static type make(double x) { return static_cast<long long>(llround(x * 1e12)); }
  static std::string str(const type& x) { return std::to_string(x) + "e-12"; }
};

}  // namespace detail

// Hash-consing table for measured-tree isomorphism classes. Two trees get the
// same id iff they are isomorphic as trees with masses; `labelled` forms also
// require equal level-0 state identities at the leaves. Ids are only
// meaningful within one table, which is why cross-model comparisons share it.
template <class T>
class CanonicalFormTable {
 public:
  using mass_t = typename detail::canon_mass<T>::type;
  using NodeKey = std::vector<std::pair<mass_t, int>>;  // sorted (mass, child id)

  int leaf(int label) {  // label -1 = unlabelled
    auto it = leaves_.find(label);
    if (it != leaves_.end()) return it->second;
    const int id = next_id();
    leaves_[label] = id;
    defs_[id] = label < 0 ? std::string("L") : "L" + std::to_string(label);
    return id;
  }

  int node(NodeKey key) {
    std::sort(key.begin(), key.end());
    auto it = nodes_.find(key);
    if (it != nodes_.end()) return it->second;
    const int id = next_id();
    std::string def = "(";
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (i) def += ",";
      def += detail::canon_mass<T>::str(key[i].first) + "*#" + std::to_string(key[i].second);
    }
    def += ")";
    nodes_.emplace(std::move(key), id);
    defs_[id] = std::move(def);
    return id;
  }

  // one-level definition string; children referenced by id
  const std::string& definition(int id) const { return defs_.at(id); }

  // fully expanded canonical string (use only on small trees)
  std::string render(int id) const {
    const std::string& def = defs_.at(id);
    std::string out;
    for (std::size_t i = 0; i < def.size(); ++i) {
      if (def[i] == '#') {
        std::size_t j = i + 1;
        int ref = 0;
        while (j < def.size() && isdigit(def[j])) ref = ref * 10 + (def[j++] - '0');
        out += render(ref);
        i = j - 1;
      } else {
        out += def[i];
      }
    }
    return out;
  }

 private:
  int next_id() { return counter_++; }
  int counter_ = 0;
  std::map<int, int> leaves_;
  std::map<NodeKey, int> nodes_;
  std::map<int, std::string> defs_;
};

// canonical form of the subtree rooted at a model state, memoized per model
template <class T>
class ModelCanonicalizer {
 public:
  ModelCanonicalizer(const MarkovModel<T>& model, CanonicalFormTable<T>& table, bool labelled)
      : model_(model), table_(table), labelled_(labelled) {}

  int form(std::size_t level, std::size_t state) {
    auto key = std::make_pair(level, state);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    int id;
    if (level == 0) {
      id = table_.leaf(labelled_ ? static_cast<int>(state) : -1);
    } else {
      const auto& q = kernel(level);
      if (!q.supported[state])
        throw Error(ErrorCode::ZeroMassState, "canonical form of a zero-mass state");
      typename CanonicalFormTable<T>::NodeKey children;
      for (std::size_t c = 0; c < q.rows.cols(); ++c) {
        const T& mass = q.rows(state, c);
        if (mass == T(0)) continue;
        long mult = model_.multiplicity(level - 1, c, state);
        if (mult <= 0) mult = 1;
        T edge_mass = mass / T(mult);
        const int child = form(level - 1, c);
        for (long e = 0; e < mult; ++e)
          children.emplace_back(detail::canon_mass<T>::make(edge_mass), child);
      }
      id = table_.node(std::move(children));
    }
    memo_[key] = id;
    return id;
  }

 private:
  const CotransitionKernel<T>& kernel(std::size_t level) {
    auto it = kernels_.find(level);
    if (it == kernels_.end()) it = kernels_.emplace(level, cotransitions(model_, level)).first;
    return it->second;
  }
  const MarkovModel<T>& model_;
  CanonicalFormTable<T>& table_;
  bool labelled_;
  std::map<std::pair<std::size_t, std::size_t>, int> memo_;
  std::map<std::size_t, CotransitionKernel<T>> kernels_;
};

// --- ground data at the leaves ------------------------------------------------

// Distance charged between two level-0 histories once a coupling reaches the
// leaves: |f1(x)-f2(y)| for a function pair, rho(x,y) for an initial metric.
template <class T>
struct LeafGround {
  enum class Kind { FunctionPair, Metric };
  Kind kind = Kind::FunctionPair;
  FunctionSpec<T> f1, f2;
  InitialMetricSpec<T> rho;

  static LeafGround function_pair(FunctionSpec<T> a, FunctionSpec<T> b) {
    if (a.depth != b.depth)
      throw Error(ErrorCode::ShapeMismatch, "paired functions must have equal depth");
    LeafGround g;
    g.kind = Kind::FunctionPair;
    g.f1 = std::move(a);
    g.f2 = std::move(b);
    return g;
  }
  static LeafGround metric(InitialMetricSpec<T> m) {
    LeafGround g;
    g.kind = Kind::Metric;
    g.rho = std::move(m);
    return g;
  }

  std::size_t depth() const { return kind == Kind::FunctionPair ? f1.depth : rho.depth(); }

  T cost(const std::vector<int>& x, const std::vector<int>& y) const {
    if (kind == Kind::FunctionPair) return abs_val(f1.eval(x) - f2.eval(y));
    return rho.ground(x, y);
  }
};

// --- coupling distances on model trees -----------------------------------------

// Dynamic program over state pairs: the subtree below a state depends only on
// (level, state), so distances memoize on (level, a, b) plus the fixed
// coordinates above the node that the leaf ground still needs (nonempty only
// below the ground depth). Cost per level stays polynomial in the state count
// even though leaf counts grow exponentially.
template <class T>
class CouplingEngine {
 public:
  CouplingEngine(const MarkovModel<T>& model, LeafGround<T> ground,
                 TreeCouplingSemantics semantics)
      : model_(model),
        ground_(std::move(ground)),
        sem_(semantics),
        canonicalizer_(model, canon_table_, /*labelled=*/true) {}

  // distance between the level-n trees rooted at states a and b;
  // nullopt reports NoCoupling (iso_mixture only)
  std::optional<T> distance(std::size_t n, std::size_t a, std::size_t b) {
    if (n > model_.horizon()) throw Error(ErrorCode::HorizonExceeded, "tree level beyond horizon");
    const std::vector<T> mu = level_marginal(model_, n).weights;
    if (a >= mu.size() || mu[a] == T(0) || b >= mu.size() || mu[b] == T(0))
      throw Error(ErrorCode::ZeroMassState, "coupling distance at a zero-mass state");
    if (ground_.depth() > n)
      throw Error(ErrorCode::LevelTooSmall, "ground depth exceeds tree height");
    return dist(static_cast<int>(n), static_cast<int>(a), static_cast<int>(b), {}, {});
  }

 private:
  struct Child {
    int state;
    T edge_mass;
    long count;  // parallel edges
  };

  std::vector<Child> children_of(int level, int state) {
    const auto& q = kernel(static_cast<std::size_t>(level));
    std::vector<Child> out;
    for (std::size_t c = 0; c < q.rows.cols(); ++c) {
      const T& mass = q.rows(static_cast<std::size_t>(state), c);
      if (mass == T(0)) continue;
      long mult = model_.multiplicity(static_cast<std::size_t>(level) - 1, c,
                                      static_cast<std::size_t>(state));
      if (mult <= 0) mult = 1;
      out.push_back(Child{static_cast<int>(c), mass / T(mult), mult});
    }
    return out;
  }

  std::optional<T> dist(int level, int a, int b, const std::vector<int>& ctx1,
                        const std::vector<int>& ctx2) {
    const int m = static_cast<int>(ground_.depth());
    std::vector<int> key;
    key.reserve(3 + ctx1.size() + ctx2.size());
    key.push_back(level);
    key.push_back(a);
    key.push_back(b);
    key.insert(key.end(), ctx1.begin(), ctx1.end());
    key.insert(key.end(), ctx2.begin(), ctx2.end());
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    std::optional<T> result;
    if (level == 0) {
      std::vector<int> x, y;
      x.push_back(a);
      x.insert(x.end(), ctx1.begin(), ctx1.end());
      y.push_back(b);
      y.insert(y.end(), ctx2.begin(), ctx2.end());
      result = ground_.cost(x, y);
    } else {
      // coordinates the ground still needs below this node
      std::vector<int> down1, down2;
      if (level <= m - 1) {
        down1.push_back(a);
        down1.insert(down1.end(), ctx1.begin(), ctx1.end());
        down2.push_back(b);
        down2.insert(down2.end(), ctx2.begin(), ctx2.end());
      }
      std::vector<Child> ca = children_of(level, a);
      std::vector<Child> cb = children_of(level, b);
      switch (sem_) {
        case TreeCouplingSemantics::MarkovRecursive:
          result = markov_node(level, ca, cb, down1, down2);
          break;
        case TreeCouplingSemantics::AutomorphismOrbit:
          result = orbit_node(level, ca, cb, down1, down2);
          break;
        case TreeCouplingSemantics::IsoMixture:
          result = iso_node(level, ca, cb, down1, down2);
          break;
      }
    }
    memo_[key] = result;
    return result;
  }

  T child_cost(int level, const Child& x, const Child& y, const std::vector<int>& down1,
               const std::vector<int>& down2) {
    std::optional<T> v = dist(level - 1, x.state, y.state, down1, down2);
    if (!v.has_value())
      throw Error(ErrorCode::SolverStall, "unexpected NoCoupling below a feasible node");
    return *v;
  }

  std::optional<T> markov_node(int level, const std::vector<Child>& ca,
                               const std::vector<Child>& cb, const std::vector<int>& down1,
                               const std::vector<int>& down2) {
    std::vector<T> wa, wb;
    for (const Child& c : ca) wa.push_back(c.edge_mass * T(c.count));
    for (const Child& c : cb) wb.push_back(c.edge_mass * T(c.count));
    Matrix<T> cost(ca.size(), cb.size());
    for (std::size_t i = 0; i < ca.size(); ++i)
      for (std::size_t j = 0; j < cb.size(); ++j)
        cost(i, j) = child_cost(level, ca[i], cb[j], down1, down2);
    return transport_lp(wa, wb, cost).value;
  }

  std::optional<T> orbit_node(int level, const std::vector<Child>& ca,
                              const std::vector<Child>& cb, const std::vector<int>& down1,
                              const std::vector<int>& down2) {
    long ra = 0, rb = 0;
    for (const Child& c : ca) ra += c.count;
    for (const Child& c : cb) rb += c.count;
    if (ra != rb)
      throw Error(ErrorCode::HeightMismatch, "automorphism orbit needs equal branching");
    T uniform = T(1) / T(ra);
    for (const Child& c : ca)
      if (c.edge_mass != uniform)
        throw Error(ErrorCode::ShapeMismatch,
                    "automorphism_orbit requires uniform child masses");
    for (const Child& c : cb)
      if (c.edge_mass != uniform)
        throw Error(ErrorCode::ShapeMismatch,
                    "automorphism_orbit requires uniform child masses");
    // Birkhoff: with uniform marginals the transport optimum is attained at a
    // permutation, so the assignment minimum equals the transport value.
    return markov_node(level, ca, cb, down1, down2);
  }

  std::optional<T> iso_node(int level, const std::vector<Child>& ca, const std::vector<Child>& cb,
                            const std::vector<int>& down1, const std::vector<int>& down2) {
    using mass_t = typename detail::canon_mass<T>::type;
    using ClassKey = std::pair<mass_t, int>;  // (edge mass, labelled form)
    std::map<ClassKey, std::vector<Child>> ga, gb;
    for (const Child& c : ca)
      ga[{detail::canon_mass<T>::make(c.edge_mass),
          canonicalizer_.form(static_cast<std::size_t>(level - 1),
                              static_cast<std::size_t>(c.state))}]
          .push_back(c);
    for (const Child& c : cb)
      gb[{detail::canon_mass<T>::make(c.edge_mass),
          canonicalizer_.form(static_cast<std::size_t>(level - 1),
                              static_cast<std::size_t>(c.state))}]
          .push_back(c);
    if (ga.size() != gb.size()) return std::nullopt;
    T total(0);
    for (auto& [cls, members_a] : ga) {
      auto itb = gb.find(cls);
      if (itb == gb.end()) return std::nullopt;
      auto& members_b = itb->second;
      long count_a = 0, count_b = 0;
      for (const Child& c : members_a) count_a += c.count;
      for (const Child& c : members_b) count_b += c.count;
      if (count_a != count_b) return std::nullopt;
      // within a class every pairing is admissible; solve the class transport
      std::vector<T> wa, wb;
      for (const Child& c : members_a) wa.push_back(T(c.count));
      for (const Child& c : members_b) wb.push_back(T(c.count));
      Matrix<T> cost(members_a.size(), members_b.size());
      for (std::size_t i = 0; i < members_a.size(); ++i)
        for (std::size_t j = 0; j < members_b.size(); ++j) {
          std::optional<T> v =
              dist(level - 1, members_a[i].state, members_b[j].state, down1, down2);
          if (!v.has_value()) return std::nullopt;
          cost(i, j) = *v;
        }
      TransportResult<T> res = detail::simplex_balanced(wa, wb, cost);
      // class totals were expressed in edge counts; convert back to mass
      const Child& any = members_a.front();
      total += res.value * any.edge_mass;
    }
    return total;
  }

  const CotransitionKernel<T>& kernel(std::size_t level) {
    auto it = kernels_.find(level);
    if (it == kernels_.end()) it = kernels_.emplace(level, cotransitions(model_, level)).first;
    return it->second;
  }

  const MarkovModel<T>& model_;
  LeafGround<T> ground_;
  TreeCouplingSemantics sem_;
  std::map<std::vector<int>, std::optional<T>> memo_;
  std::map<std::size_t, CotransitionKernel<T>> kernels_;
  CanonicalFormTable<T> canon_table_;
  ModelCanonicalizer<T> canonicalizer_;
};

// --- criterion ----------------------------------------------------------------

template <class T>
struct PairDistance {
  std::size_t a = 0;
  std::size_t b = 0;
  std::optional<T> distance;  // nullopt = NoCoupling
};

template <class T>
struct CriterionReport {
  std::size_t level = 0;
  TreeCouplingSemantics semantics = TreeCouplingSemantics::MarkovRecursive;
  std::vector<PairDistance<T>> pairs;  // unordered support pairs a <= b
  T below_eps_mass = T(0);             // mu x mu mass with distance < eps
  bool satisfied = false;
};

// Standardness criterion at one level: couple every pair of partition
// elements and test whether pairs closer than eps carry mass > 1 - eps.
template <class T>
CriterionReport<T> criterion_check(const MarkovModel<T>& model, const FunctionSpec<T>& f,
                                   const T& eps, std::size_t n, TreeCouplingSemantics semantics) {
  if (n < f.depth)
    throw Error(ErrorCode::LevelTooSmall, "criterion level below the function depth");
  if (n > model.horizon()) throw Error(ErrorCode::HorizonExceeded, "criterion level");
  CriterionReport<T> rep;
  rep.level = n;
  rep.semantics = semantics;
  CouplingEngine<T> engine(model, LeafGround<T>::function_pair(f, f), semantics);
  const std::vector<T> mu = level_marginal(model, n).weights;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    if (mu[a] == T(0)) continue;
    for (std::size_t b = a; b < mu.size(); ++b) {
      if (mu[b] == T(0)) continue;
      PairDistance<T> pd;
      pd.a = a;
      pd.b = b;
      pd.distance = engine.distance(n, a, b);
      rep.pairs.push_back(pd);
      if (pd.distance.has_value() && *pd.distance < eps) {
        T w = mu[a] * mu[b];
        rep.below_eps_mass += (a == b) ? w : w + w;
      }
    }
  }
  T threshold = T(1) - eps;
  rep.satisfied = rep.below_eps_mass > threshold;
  return rep;
}

// Criterion for the quotient filtration xi_{n}/xi_k: the model re-based at
// level k, evaluated at (absolute) level n.
template <class T>
CriterionReport<T> quotient_criterion(const MarkovModel<T>& model, const FunctionSpec<T>& f,
                                      const T& eps, std::size_t n, std::size_t k,
                                      TreeCouplingSemantics semantics) {
  if (k >= n) throw Error(ErrorCode::LevelTooSmall, "quotient base must lie below the level");
  return criterion_check(rebase(model, k), f, eps, n - k, semantics);
}

// --- martingale form ----------------------------------------------------------

template <class T>
struct MartingaleReport {
  std::size_t level = 0;  // n + 1
  Matrix<T> r;            // r_n over level-(n+1) states (0 off support)
  T integral = T(0);      // sum mu(x) mu(y) r_n(x,y)
};

// r_n(x,y): minimal expected transport distance between the conditional laws
// of the history given the level-(n+1) state, minimized over recursive
// (Markov) couplings; coincides with the transferred semimetric at level n+1.
template <class T>
MartingaleReport<T> martingale_distance(const MarkovModel<T>& model, std::size_t n,
                                        const InitialMetricSpec<T>& rho) {
  if (n + 1 > model.horizon())
    throw Error(ErrorCode::HorizonExceeded, "martingale level beyond horizon");
  MartingaleReport<T> rep;
  rep.level = n + 1;
  CouplingEngine<T> engine(model, LeafGround<T>::metric(rho),
                           TreeCouplingSemantics::MarkovRecursive);
  const std::vector<T> mu = level_marginal(model, n + 1).weights;
  rep.r = Matrix<T>(mu.size(), mu.size(), T(0));
  for (std::size_t x = 0; x < mu.size(); ++x) {
    if (mu[x] == T(0)) continue;
    for (std::size_t y = x + 1; y < mu.size(); ++y) {
      if (mu[y] == T(0)) continue;
      std::optional<T> v = engine.distance(n + 1, x, y);
      rep.r(x, y) = *v;
      rep.r(y, x) = *v;
    }
  }
  for (std::size_t x = 0; x < mu.size(); ++x)
    for (std::size_t y = 0; y < mu.size(); ++y) rep.integral += mu[x] * mu[y] * rep.r(x, y);
  return rep;
}

// --- explicit-tree engine -------------------------------------------------------

// Leaf values of a model tree under f, in DFS order. The history of a leaf
// reads coordinates bottom-up: x_0 is the leaf state.
template <class T>
std::vector<T> leaf_valuation(const TreePtr<T>& tree, const FunctionSpec<T>& f) {
  if (static_cast<std::size_t>(tree->level) < f.depth)
    throw Error(ErrorCode::LevelTooSmall, "function depth exceeds tree height");
  std::vector<T> out;
  out.reserve(tree->leaf_count);
  std::vector<int> path;  // states below the root down to the current node:
                          // at a leaf it reads x_{n-1}, ..., x_1, x_0
  auto rec = [&](auto&& self, const TreePtr<T>& node) -> void {
    if (node->is_leaf()) {
      std::vector<int> hist;  // (x_0 ... x_{m-1})
      for (std::size_t i = path.size(); i-- > 0 && hist.size() < f.depth;)
        hist.push_back(path[i]);
      out.push_back(f.eval(hist));
      return;
    }
    for (const auto& [mass, child] : node->children) {
      path.push_back(child->state);
      self(self, child);
      path.pop_back();
    }
  };
  rec(rec, tree);
  return out;
}

namespace detail {

template <class T>
int explicit_form(const TreePtr<T>& node, CanonicalFormTable<T>& table,
                  std::map<const EquippedTree<T>*, int>& memo) {
  auto it = memo.find(node.get());
  if (it != memo.end()) return it->second;
  int id;
  if (node->is_leaf()) {
    id = table.leaf(node->state);
  } else {
    typename CanonicalFormTable<T>::NodeKey key;
    for (const auto& [mass, child] : node->children)
      key.emplace_back(canon_mass<T>::make(mass), explicit_form(child, table, memo));
    id = table.node(std::move(key));
  }
  memo[node.get()] = id;
  return id;
}

}  // namespace detail

// Coupling distance between two explicit equipped trees with per-leaf values
// (DFS order). General but exponential in principle; meant for small trees
// and for cross-checking the model DP.
template <class T>
std::optional<T> coupling_distance(const TreePtr<T>& t1, const std::vector<T>& vals1,
                                   const TreePtr<T>& t2, const std::vector<T>& vals2,
                                   TreeCouplingSemantics semantics) {
  if (t1->level != t2->level)
    throw Error(ErrorCode::HeightMismatch, "coupled trees must have equal height");
  if (vals1.size() != t1->leaf_count || vals2.size() != t2->leaf_count)
    throw Error(ErrorCode::DimensionMismatch, "leaf valuation length mismatch");

  CanonicalFormTable<T> table;
  std::map<const EquippedTree<T>*, int> form_memo;

  auto rec = [&](auto&& self, const TreePtr<T>& a, std::size_t off1, const TreePtr<T>& b,
                 std::size_t off2) -> std::optional<T> {
    if (a->is_leaf()) return abs_val(vals1[off1] - vals2[off2]);

    const std::size_t na = a->children.size();
    const std::size_t nb = b->children.size();
    std::vector<std::size_t> offs_a(na), offs_b(nb);
    {
      std::size_t o = off1;
      for (std::size_t i = 0; i < na; ++i) {
        offs_a[i] = o;
        o += a->children[i].second->leaf_count;
      }
      o = off2;
      for (std::size_t j = 0; j < nb; ++j) {
        offs_b[j] = o;
        o += b->children[j].second->leaf_count;
      }
    }

    switch (semantics) {
      case TreeCouplingSemantics::MarkovRecursive: {
        std::vector<T> wa, wb;
        for (const auto& [mass, child] : a->children) wa.push_back(mass);
        for (const auto& [mass, child] : b->children) wb.push_back(mass);
        Matrix<T> cost(na, nb);
        for (std::size_t i = 0; i < na; ++i)
          for (std::size_t j = 0; j < nb; ++j) {
            auto v = self(self, a->children[i].second, offs_a[i], b->children[j].second, offs_b[j]);
            if (!v.has_value()) return std::nullopt;
            cost(i, j) = *v;
          }
        return transport_lp(wa, wb, cost).value;
      }
      case TreeCouplingSemantics::AutomorphismOrbit: {
        if (na != nb)
          throw Error(ErrorCode::HeightMismatch, "automorphism orbit needs equal branching");
        if (na > 6) throw Error(ErrorCode::TooLarge, "orbit matching limited to arity 6");
        T uniform = T(1) / T(static_cast<long>(na));
        for (const auto& [mass, child] : a->children)
          if (mass != uniform)
            throw Error(ErrorCode::ShapeMismatch,
                        "automorphism_orbit requires uniform child masses");
        for (const auto& [mass, child] : b->children)
          if (mass != uniform)
            throw Error(ErrorCode::ShapeMismatch,
                        "automorphism_orbit requires uniform child masses");
        Matrix<T> cost(na, na);
        for (std::size_t i = 0; i < na; ++i)
          for (std::size_t j = 0; j < na; ++j) {
            auto v = self(self, a->children[i].second, offs_a[i], b->children[j].second, offs_b[j]);
            if (!v.has_value()) return std::nullopt;
            cost(i, j) = *v;
          }
        std::vector<std::size_t> perm(na);
        std::iota(perm.begin(), perm.end(), 0);
        std::optional<T> best;
        do {
          T v(0);
          for (std::size_t i = 0; i < na; ++i) v += cost(i, perm[i]);
          v = v * uniform;
          if (!best.has_value() || v < *best) best = v;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
      }
      case TreeCouplingSemantics::IsoMixture: {
        using mass_t = typename detail::canon_mass<T>::type;
        using ClassKey = std::pair<mass_t, int>;
        std::map<ClassKey, std::vector<std::size_t>> ga, gb;
        for (std::size_t i = 0; i < na; ++i)
          ga[{detail::canon_mass<T>::make(a->children[i].first),
              detail::explicit_form(a->children[i].second, table, form_memo)}]
              .push_back(i);
        for (std::size_t j = 0; j < nb; ++j)
          gb[{detail::canon_mass<T>::make(b->children[j].first),
              detail::explicit_form(b->children[j].second, table, form_memo)}]
              .push_back(j);
        if (ga.size() != gb.size()) return std::nullopt;
        T total(0);
        for (auto& [cls, ia] : ga) {
          auto itb = gb.find(cls);
          if (itb == gb.end() || itb->second.size() != ia.size()) return std::nullopt;
          auto& ib = itb->second;
          std::vector<T> wa(ia.size(), T(1)), wb(ib.size(), T(1));
          Matrix<T> cost(ia.size(), ib.size());
          for (std::size_t i = 0; i < ia.size(); ++i)
            for (std::size_t j = 0; j < ib.size(); ++j) {
              auto v = self(self, a->children[ia[i]].second, offs_a[ia[i]],
                            b->children[ib[j]].second, offs_b[ib[j]]);
              if (!v.has_value()) return std::nullopt;
              cost(i, j) = *v;
            }
          TransportResult<T> res = detail::simplex_balanced(wa, wb, cost);
          total += res.value * a->children[ia[0]].first;
        }
        return total;
      }
    }
    return std::nullopt;
  };
  return rec(rec, t1, 0, t2, 0);
}

// --- brute-force oracles --------------------------------------------------------

// markov_recursive by exhaustive recursion over vertex-enumerated plans;
// automorphism_orbit by enumerating every tree automorphism. Exact minima for
// small trees; independent of the simplex and the DP above.
template <class T>
T brute_force_coupling_oracle(const TreePtr<T>& t1, const std::vector<T>& vals1,
                              const TreePtr<T>& t2, const std::vector<T>& vals2,
                              TreeCouplingSemantics semantics) {
  if (t1->level != t2->level)
    throw Error(ErrorCode::HeightMismatch, "coupled trees must have equal height");
  if (t1->leaf_count + t2->leaf_count > 32)
    throw Error(ErrorCode::TooLarge, "oracle limited to 16 leaves per tree");

  if (semantics == TreeCouplingSemantics::MarkovRecursive) {
    auto rec = [&](auto&& self, const TreePtr<T>& a, std::size_t off1, const TreePtr<T>& b,
                   std::size_t off2) -> T {
      if (a->is_leaf()) return abs_val(vals1[off1] - vals2[off2]);
      std::vector<T> wa, wb;
      std::vector<std::size_t> offs_a, offs_b;
      std::size_t o = off1;
      for (const auto& [mass, child] : a->children) {
        wa.push_back(mass);
        offs_a.push_back(o);
        o += child->leaf_count;
      }
      o = off2;
      for (const auto& [mass, child] : b->children) {
        wb.push_back(mass);
        offs_b.push_back(o);
        o += child->leaf_count;
      }
      Matrix<T> cost(wa.size(), wb.size());
      for (std::size_t i = 0; i < wa.size(); ++i)
        for (std::size_t j = 0; j < wb.size(); ++j)
          cost(i, j) = self(self, a->children[i].second, offs_a[i], b->children[j].second,
                            offs_b[j]);
      std::optional<T> best;
      for (const Matrix<T>& plan : enumerate_basic_plans(wa, wb)) {
        T v(0);
        for (std::size_t i = 0; i < wa.size(); ++i)
          for (std::size_t j = 0; j < wb.size(); ++j) v += plan(i, j) * cost(i, j);
        if (!best.has_value() || v < *best) best = v;
      }
      if (!best.has_value()) throw Error(ErrorCode::SolverStall, "no feasible plan in oracle");
      return *best;
    };
    return rec(rec, t1, 0, t2, 0);
  }

  if (semantics == TreeCouplingSemantics::AutomorphismOrbit) {
    // enumerate leaf permutations induced by automorphisms of t2's shape
    std::vector<std::vector<std::size_t>> autos;
    auto enumerate = [&](auto&& self, const TreePtr<T>& node) -> std::vector<std::vector<std::size_t>> {
      if (node->is_leaf()) return {{0}};
      const std::size_t r = node->children.size();
      std::vector<std::vector<std::vector<std::size_t>>> per_child;
      for (const auto& [mass, child] : node->children) per_child.push_back(self(self, child));
      std::vector<std::size_t> sizes;
      for (const auto& [mass, child] : node->children) sizes.push_back(child->leaf_count);
      for (std::size_t i = 1; i < r; ++i)
        if (sizes[i] != sizes[0])
          throw Error(ErrorCode::ShapeMismatch, "orbit oracle needs a homogeneous tree");
      std::vector<std::vector<std::size_t>> result;
      std::vector<std::size_t> perm(r);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        // combine child automorphism choices
        std::vector<std::size_t> counters(r, 0);
        while (true) {
          std::vector<std::size_t> leafmap(node->leaf_count);
          std::size_t base_src = 0;
          for (std::size_t i = 0; i < r; ++i) {
            const std::size_t base_dst = perm[i] * sizes[0];
            const auto& sub = per_child[i][counters[i]];
            for (std::size_t l = 0; l < sizes[0]; ++l) leafmap[base_src + l] = base_dst + sub[l];
            base_src += sizes[0];
          }
          result.push_back(std::move(leafmap));
          if (result.size() > 200000)
            throw Error(ErrorCode::TooLarge, "automorphism group too large to enumerate");
          std::size_t pos = 0;
          while (pos < r) {
            if (++counters[pos] < per_child[pos].size()) break;
            counters[pos] = 0;
            ++pos;
          }
          if (pos == r) break;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      return result;
    };
    autos = enumerate(enumerate, t2);
    if (t1->leaf_count != t2->leaf_count)
      throw Error(ErrorCode::HeightMismatch, "orbit oracle needs equal leaf counts");
    std::optional<T> best;
    T inv = T(1) / T(static_cast<long>(t1->leaf_count));
    for (const auto& phi : autos) {
      T v(0);
      for (std::size_t z = 0; z < t1->leaf_count; ++z) v += abs_val(vals1[z] - vals2[phi[z]]);
      v = v * inv;
      if (!best.has_value() || v < *best) best = v;
    }
    return *best;
  }

  throw Error(ErrorCode::TooLarge, "no brute-force oracle for iso_mixture");
}

}  // namespace filtlab
