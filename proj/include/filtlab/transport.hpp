#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "filtlab/errors.hpp"
#include "filtlab/matrix.hpp"
#include "filtlab/scalar.hpp"

namespace filtlab {

// Symmetric nonnegative distance matrix with zero diagonal. The triangle
// inequality is checked on validated construction; `allow_zero_offdiag`
// distinguishes semimetrics from strict metrics.
template <class T>
class Semimetric {
 public:
  Semimetric() : n_(0) {}

  static Semimetric validated(const Matrix<T>& d, bool allow_zero_offdiag = true) {
    if (d.rows() != d.cols())
      throw Error(ErrorCode::ShapeMismatch, "distance matrix must be square");
    const T tol = scalar_traits<T>::tolerance();
    const std::size_t n = d.rows();
    for (std::size_t i = 0; i < n; ++i) {
      if (abs_val(d(i, i)) > tol)
        throw Error(ErrorCode::ShapeMismatch, "nonzero diagonal in distance matrix");
      for (std::size_t j = 0; j < n; ++j) {
        if (d(i, j) < -tol)
          throw Error(ErrorCode::ShapeMismatch, "negative distance entry");
        T asym = d(i, j) - d(j, i);
        if (abs_val(asym) > tol)
          throw Error(ErrorCode::ShapeMismatch, "asymmetric distance matrix");
        if (!allow_zero_offdiag && i != j && d(i, j) <= tol)
          throw Error(ErrorCode::ShapeMismatch, "zero off-diagonal entry in a strict metric");
      }
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          T lhs = d(a, c);
          T rhs = d(a, b) + d(b, c);
          if (lhs > rhs + tol)
            throw Error(ErrorCode::ShapeMismatch, "triangle inequality violated");
        }
    return Semimetric(d);
  }

  // For matrices that are symmetric/triangle-valid by construction
  // (e.g. outputs of the transfer operator).
  static Semimetric trusted(Matrix<T> d) { return Semimetric(std::move(d)); }

  static Semimetric discrete(std::size_t n) {
    Matrix<T> d(n, n, T(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) d(i, j) = T(1);
    return Semimetric(std::move(d));
  }

  static Semimetric zero(std::size_t n) { return Semimetric(Matrix<T>(n, n, T(0))); }

  std::size_t size() const { return n_; }
  const T& operator()(std::size_t i, std::size_t j) const { return d_(i, j); }
  const Matrix<T>& matrix() const { return d_; }

  T max_entry() const {
    T m(0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (d_(i, j) > m) m = d_(i, j);
    return m;
  }

  Semimetric scaled(const T& c) const {
    Matrix<T> out(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) out(i, j) = d_(i, j) * c;
    return Semimetric(std::move(out));
  }

 private:
  explicit Semimetric(Matrix<T> d) : n_(d.rows()), d_(std::move(d)) {}
  std::size_t n_;
  Matrix<T> d_;
};

// Joint mass matrix with prescribed marginals.
template <class T>
struct CouplingPlan {
  Matrix<T> psi;  // rows x cols
  std::vector<T> row_marginal;
  std::vector<T> col_marginal;

  T row_sum(std::size_t i) const {
    T s(0);
    for (std::size_t j = 0; j < psi.cols(); ++j) s += psi(i, j);
    return s;
  }
  T col_sum(std::size_t j) const {
    T s(0);
    for (std::size_t i = 0; i < psi.rows(); ++i) s += psi(i, j);
    return s;
  }
};

template <class T>
struct TransportResult {
  T value;
  CouplingPlan<T> plan;
};

namespace detail {

// Transportation simplex on the complete bipartite graph. Entering arc is
// the first (row-major) cell with negative reduced cost and the leaving arc
// the first cell attaining the minimum ratio — Bland's rule, so the method
// terminates even on degenerate bases. All pivoting is done in T, hence
// exact in rational mode.
//
// Preconditions (enforced by the callers): all supplies/demands positive,
// equal totals.
template <class T>
TransportResult<T> simplex_balanced(const std::vector<T>& supply, const std::vector<T>& demand,
                                    const Matrix<T>& cost) {
  const std::size_t m = supply.size();
  const std::size_t k = demand.size();
  const std::size_t nodes = m + k;

  struct Arc {
    std::size_t i, j;
    T flow;
  };
  std::vector<Arc> basis;
  basis.reserve(m + k - 1);

  // north-west corner start: always a spanning tree
  {
    std::vector<T> rem_r = supply;
    std::vector<T> rem_c = demand;
    std::size_t i = 0, j = 0;
    while (true) {
      T f = rem_r[i] < rem_c[j] ? rem_r[i] : rem_c[j];
      basis.push_back({i, j, f});
      rem_r[i] -= f;
      rem_c[j] -= f;
      if (i == m - 1 && j == k - 1) break;
      if (rem_r[i] == T(0) && i < m - 1)
        ++i;
      else
        ++j;
    }
  }

  // tolerance for double mode; zero in exact mode
  const T tol = scalar_traits<T>::tolerance();

  const std::size_t max_pivots = 2000 * (nodes + 2) * (nodes + 2);
  std::vector<std::vector<std::size_t>> adj(nodes);  // node -> indices into basis
  std::vector<T> dual(nodes, T(0));
  std::vector<int> parent_arc(nodes);
  std::vector<std::size_t> parent_node(nodes);
  std::vector<int> order;
  order.reserve(nodes);

  for (std::size_t pivot = 0;; ++pivot) {
    if (pivot > max_pivots)
      throw Error(ErrorCode::SolverStall, "transport simplex exceeded pivot budget");

    // duals from the basis tree (row node r <-> node r, col node c <-> node m+c)
    for (auto& a : adj) a.clear();
    for (std::size_t t = 0; t < basis.size(); ++t) {
      adj[basis[t].i].push_back(t);
      adj[m + basis[t].j].push_back(t);
    }
    order.clear();
    std::vector<char> seen(nodes, 0);
    dual.assign(nodes, T(0));
    seen[0] = 1;
    parent_arc.assign(nodes, -1);
    order.push_back(0);
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
      const std::size_t u = static_cast<std::size_t>(order[qi]);
      for (std::size_t t : adj[u]) {
        const std::size_t other = (u < m) ? m + basis[t].j : basis[t].i;
        if (seen[other]) continue;
        seen[other] = 1;
        parent_arc[other] = static_cast<int>(t);
        parent_node[other] = u;
        const T c = cost(basis[t].i, basis[t].j);
        dual[other] = c - dual[u];
        order.push_back(static_cast<int>(other));
      }
    }
    if (order.size() != nodes)
      throw Error(ErrorCode::SolverStall, "transport basis lost spanning property");

    // entering arc: first negative reduced cost (Bland)
    std::size_t ei = 0, ej = 0;
    bool found = false;
    for (std::size_t i = 0; i < m && !found; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        T rc = cost(i, j) - dual[i] - dual[m + j];
        if (rc < -tol) {
          ei = i;
          ej = j;
          found = true;
          break;
        }
      }
    if (!found) break;  // optimal

    // cycle: tree path from row node ei to col node m+ej, plus entering arc.
    // Arcs at odd positions along the path (starting from ei) lose flow.
    std::vector<std::size_t> path_arcs;
    {
      // collect node paths to the root, then splice at the meeting point
      auto path_to_root = [&](std::size_t u) {
        std::vector<std::size_t> nodes_up;
        while (true) {
          nodes_up.push_back(u);
          if (parent_arc[u] < 0) break;
          u = parent_node[u];
        }
        return nodes_up;
      };
      std::vector<std::size_t> pa = path_to_root(ei);
      std::vector<std::size_t> pb = path_to_root(m + ej);
      std::vector<char> in_pa(nodes, 0);
      for (std::size_t u : pa) in_pa[u] = 1;
      std::size_t meet = 0;
      for (std::size_t u : pb)
        if (in_pa[u]) {
          meet = u;
          break;
        }
      std::vector<std::size_t> walk;  // ei ... meet ... m+ej as node list
      for (std::size_t u : pa) {
        walk.push_back(u);
        if (u == meet) break;
      }
      std::vector<std::size_t> tail;
      for (std::size_t u : pb) {
        if (u == meet) break;
        tail.push_back(u);
      }
      std::reverse(tail.begin(), tail.end());
      for (std::size_t u : tail) walk.push_back(u);
      for (std::size_t t = 0; t + 1 < walk.size(); ++t) {
        // arc connecting walk[t] and walk[t+1]
        const std::size_t u = walk[t];
        const std::size_t v = walk[t + 1];
        const std::size_t child = (parent_arc[u] >= 0 && parent_node[u] == v) ? u : v;
        path_arcs.push_back(static_cast<std::size_t>(parent_arc[child]));
      }
    }

    // theta = min flow over arcs losing flow; Bland tie-break by basis index
    bool have_theta = false;
    T theta(0);
    std::size_t leaving = 0;
    for (std::size_t t = 0; t < path_arcs.size(); t += 2) {
      const Arc& a = basis[path_arcs[t]];
      if (!have_theta || a.flow < theta ||
          (a.flow == theta && path_arcs[t] < leaving)) {
        theta = a.flow;
        leaving = path_arcs[t];
        have_theta = true;
      }
    }
    if (!have_theta)
      throw Error(ErrorCode::SolverStall, "transport pivot found no leaving arc");

    for (std::size_t t = 0; t < path_arcs.size(); ++t) {
      if (t % 2 == 0)
        basis[path_arcs[t]].flow -= theta;
      else
        basis[path_arcs[t]].flow += theta;
    }
    basis[leaving] = Arc{ei, ej, theta};
    if constexpr (!scalar_traits<T>::exact) {
      for (auto& a : basis)
        if (a.flow < T(0)) a.flow = T(0);
    }
  }

  TransportResult<T> out;
  out.plan.psi = Matrix<T>(m, k, T(0));
  out.plan.row_marginal = supply;
  out.plan.col_marginal = demand;
  T value(0);
  for (const Arc& a : basis) {
    out.plan.psi(a.i, a.j) += a.flow;
    value += a.flow * cost(a.i, a.j);
  }
  out.value = value;
  return out;
}

template <class T>
void check_marginal(const std::vector<T>& v, const char* name) {
  const T tol = scalar_traits<T>::tolerance();
  T s(0);
  for (const T& x : v) {
    if (x < -tol) throw Error(ErrorCode::NotNormalized, std::string(name) + " has negative mass");
    s += x;
  }
  T dev = s - T(1);
  if (abs_val(dev) > tol)
    throw Error(ErrorCode::NotNormalized, std::string(name) + " does not sum to 1");
}

}  // namespace detail

// Exact optimum of the transport linear program
//   min sum_ij psi(i,j) cost(i,j)  s.t.  psi >= 0, row sums = alpha, col sums = beta.
// Zero-mass rows/columns are dropped before solving and reinserted as zero
// rows/columns of the returned plan.
template <class T>
TransportResult<T> transport_lp(const std::vector<T>& alpha, const std::vector<T>& beta,
                                const Matrix<T>& cost) {
  if (cost.rows() != alpha.size() || cost.cols() != beta.size())
    throw Error(ErrorCode::DimensionMismatch, "cost shape does not match marginals");
  detail::check_marginal(alpha, "row marginal");
  detail::check_marginal(beta, "column marginal");

  std::vector<std::size_t> ri, ci;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] > T(0)) ri.push_back(i);
  for (std::size_t j = 0; j < beta.size(); ++j)
    if (beta[j] > T(0)) ci.push_back(j);
  if (ri.empty() || ci.empty())
    throw Error(ErrorCode::NotNormalized, "marginal with empty support");

  std::vector<T> supply(ri.size()), demand(ci.size());
  T sa(0), sb(0);
  for (std::size_t i = 0; i < ri.size(); ++i) {
    supply[i] = alpha[ri[i]];
    sa += supply[i];
  }
  for (std::size_t j = 0; j < ci.size(); ++j) {
    demand[j] = beta[ci[j]];
    sb += demand[j];
  }
  if constexpr (scalar_traits<T>::exact) {
    if (sa != sb) throw Error(ErrorCode::NotNormalized, "marginal totals differ");
  } else {
    // rescale demand so totals match bit-exactly
    for (auto& d : demand) d = d * (sa / sb);
  }

  Matrix<T> sub(ri.size(), ci.size());
  for (std::size_t i = 0; i < ri.size(); ++i)
    for (std::size_t j = 0; j < ci.size(); ++j) sub(i, j) = cost(ri[i], ci[j]);

  TransportResult<T> reduced = detail::simplex_balanced(supply, demand, sub);

  TransportResult<T> out;
  out.value = reduced.value;
  out.plan.psi = Matrix<T>(alpha.size(), beta.size(), T(0));
  out.plan.row_marginal = alpha;
  out.plan.col_marginal = beta;
  for (std::size_t i = 0; i < ri.size(); ++i)
    for (std::size_t j = 0; j < ci.size(); ++j)
      out.plan.psi(ri[i], ci[j]) = reduced.plan.psi(i, j);
  return out;
}

// Kantorovich distance between two probability vectors over the same ground
// (semi)metric, together with an optimal coupling attaining it.
template <class T>
TransportResult<T> kantorovich(const std::vector<T>& alpha, const std::vector<T>& beta,
                               const Semimetric<T>& ground) {
  if (alpha.size() != ground.size() || beta.size() != ground.size())
    throw Error(ErrorCode::DimensionMismatch, "measures not supported on the ground space");
  return transport_lp(alpha, beta, ground.matrix());
}

template <class T>
T kantorovich_value(const std::vector<T>& alpha, const std::vector<T>& beta,
                    const Semimetric<T>& ground) {
  return kantorovich(alpha, beta, ground).value;
}

// (1/2) sum |alpha_i - beta_i|; equals kantorovich with the discrete ground metric.
template <class T>
T total_variation(const std::vector<T>& alpha, const std::vector<T>& beta) {
  if (alpha.size() != beta.size())
    throw Error(ErrorCode::DimensionMismatch, "total variation of unequal-length vectors");
  T s(0);
  for (std::size_t i = 0; i < alpha.size(); ++i) s += abs_val(alpha[i] - beta[i]);
  return s / T(2);
}

// --- brute-force oracle -----------------------------------------------------

// Enumerates all basic feasible solutions (vertices of the transportation
// polytope) for small instances: each vertex is supported on a spanning tree
// of the complete bipartite graph and its flows are forced by leaf peeling.
template <class T>
std::vector<Matrix<T>> enumerate_basic_plans(const std::vector<T>& supply,
                                             const std::vector<T>& demand,
                                             std::size_t max_side = 5) {
  const std::size_t m = supply.size();
  const std::size_t k = demand.size();
  if (m == 0 || k == 0) throw Error(ErrorCode::EmptySample, "empty marginals");
  if (m > max_side || k > max_side)
    throw Error(ErrorCode::TooLarge, "vertex enumeration limited to small instances");

  const std::size_t cells = m * k;
  const std::size_t basis_size = m + k - 1;
  std::vector<std::size_t> pick(basis_size);
  std::vector<Matrix<T>> plans;

  // iterate over all cell subsets of size m + k - 1
  for (std::size_t K = 0; K < basis_size; ++K) pick[K] = K;
  while (true) {
    // spanning-tree test + flow solve by leaf peeling
    std::vector<int> deg(m + k, 0);
    std::vector<std::vector<std::size_t>> inc(m + k);
    for (std::size_t t = 0; t < basis_size; ++t) {
      const std::size_t i = pick[t] / k;
      const std::size_t j = pick[t] % k;
      deg[i]++;
      deg[m + j]++;
      inc[i].push_back(t);
      inc[m + j].push_back(t);
    }
    bool ok = true;
    for (std::size_t u = 0; u < m + k; ++u)
      if (deg[u] == 0) ok = false;
    if (ok) {
      std::vector<T> rem(m + k);
      for (std::size_t i = 0; i < m; ++i) rem[i] = supply[i];
      for (std::size_t j = 0; j < k; ++j) rem[m + j] = demand[j];
      std::vector<char> arc_done(basis_size, 0);
      std::vector<int> degree = deg;
      std::vector<T> flow(basis_size, T(0));
      std::vector<std::size_t> leaves;
      for (std::size_t u = 0; u < m + k; ++u)
        if (degree[u] == 1) leaves.push_back(u);
      std::size_t solved = 0;
      bool feasible = true;
      while (!leaves.empty()) {
        const std::size_t u = leaves.back();
        leaves.pop_back();
        if (degree[u] != 1) continue;
        std::size_t arc = basis_size;
        for (std::size_t t : inc[u])
          if (!arc_done[t]) arc = t;
        if (arc == basis_size) break;
        flow[arc] = rem[u];
        if (flow[arc] < T(0)) {
          feasible = false;
          break;
        }
        arc_done[arc] = 1;
        ++solved;
        const std::size_t i = pick[arc] / k;
        const std::size_t j = pick[arc] % k;
        const std::size_t other = (u == i) ? m + j : i;
        rem[other] -= rem[u];
        rem[u] = T(0);
        degree[u]--;
        degree[other]--;
        if (degree[other] == 1) leaves.push_back(other);
      }
      if (feasible && solved == basis_size) {
        // all node balances consumed => the subset was a spanning tree
        bool balanced = true;
        for (std::size_t u = 0; u < m + k; ++u) {
          if constexpr (scalar_traits<T>::exact) {
            if (rem[u] != T(0)) balanced = false;
          } else {
            if (abs_val(rem[u]) > 1e-9) balanced = false;
          }
        }
        if (balanced) {
          Matrix<T> plan(m, k, T(0));
          for (std::size_t t = 0; t < basis_size; ++t)
            plan(pick[t] / k, pick[t] % k) = flow[t];
          plans.push_back(std::move(plan));
        }
      }
    }

    // next combination
    std::size_t pos = basis_size;
    while (pos > 0) {
      --pos;
      if (pick[pos] != cells - basis_size + pos) break;
      if (pos == 0) return plans;
    }
    if (pick[pos] == cells - basis_size + pos) return plans;
    ++pick[pos];
    for (std::size_t t = pos + 1; t < basis_size; ++t) pick[t] = pick[t - 1] + 1;
  }
}

// Exact minimum by enumerating basic feasible solutions. Test oracle for the
// simplex path; support sizes capped at 4.
template <class T>
T brute_force_transport(const std::vector<T>& alpha, const std::vector<T>& beta,
                        const Matrix<T>& cost) {
  if (cost.rows() != alpha.size() || cost.cols() != beta.size())
    throw Error(ErrorCode::DimensionMismatch, "cost shape does not match marginals");
  detail::check_marginal(alpha, "row marginal");
  detail::check_marginal(beta, "column marginal");
  std::vector<std::size_t> ri, ci;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] > T(0)) ri.push_back(i);
  for (std::size_t j = 0; j < beta.size(); ++j)
    if (beta[j] > T(0)) ci.push_back(j);
  if (ri.size() > 4 || ci.size() > 4)
    throw Error(ErrorCode::TooLarge, "brute-force transport limited to support size 4");
  std::vector<T> supply, demand;
  for (std::size_t i : ri) supply.push_back(alpha[i]);
  for (std::size_t j : ci) demand.push_back(beta[j]);
  std::optional<T> best;
  for (const Matrix<T>& plan : enumerate_basic_plans<T>(supply, demand)) {
    T v(0);
    for (std::size_t i = 0; i < supply.size(); ++i)
      for (std::size_t j = 0; j < demand.size(); ++j)
        v += plan(i, j) * cost(ri[i], ci[j]);
    if (!best.has_value() || v < *best) best = v;
  }
  if (!best.has_value()) throw Error(ErrorCode::SolverStall, "no basic feasible plan found");
  return *best;
}

template <class T>
T brute_force_transport(const std::vector<T>& alpha, const std::vector<T>& beta,
                        const Semimetric<T>& ground) {
  return brute_force_transport(alpha, beta, ground.matrix());
}

}  // namespace filtlab
