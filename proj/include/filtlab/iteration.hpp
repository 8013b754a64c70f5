#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "filtlab/errors.hpp"
#include "filtlab/model.hpp"
#include "filtlab/parallel.hpp"
#include "filtlab/scalar.hpp"
#include "filtlab/transport.hpp"

namespace filtlab {

// Table of values on depth-m cylinders: f(x_0, ..., x_{m-1}). The table must
// cover every positive-probability cylinder of the model it is used with.
template <class T>
struct FunctionSpec {
  std::size_t depth = 1;
  std::map<std::vector<int>, T> table;
  int coord_index = -1;  // >= 0: f(x) = x_j as a real value, no table needed

  // f(x) = x_j (state index read as a real number)
  static FunctionSpec coordinate(std::size_t j) {
    FunctionSpec f;
    f.depth = j + 1;
    f.coord_index = static_cast<int>(j);
    return f;
  }

  T eval(const std::vector<int>& cylinder) const {
    if (cylinder.size() != depth)
      throw Error(ErrorCode::ShapeMismatch, "cylinder length does not match function depth");
    if (coord_index >= 0) return T(static_cast<long>(cylinder[coord_index]));
    auto it = table.find(cylinder);
    if (it == table.end())
      throw Error(ErrorCode::ShapeMismatch, "function table misses a positive-mass cylinder");
    return it->second;
  }
};

// Initial (cylinder) semimetric rho_0 for the iteration.
template <class T>
struct InitialMetricSpec {
  enum class Kind { DiscreteLevel0, WeightedCylinder, FromFunction };

  Kind kind = Kind::DiscreteLevel0;
  std::vector<T> weights;   // WeightedCylinder
  FunctionSpec<T> func;     // FromFunction

  static InitialMetricSpec discrete() { return InitialMetricSpec{}; }

  static InitialMetricSpec weighted_cylinder(std::vector<T> w) {
    if (w.empty()) throw Error(ErrorCode::ShapeMismatch, "cylinder weights must be nonempty");
    for (const T& x : w)
      if (x < T(0)) throw Error(ErrorCode::ShapeMismatch, "cylinder weights must be nonnegative");
    InitialMetricSpec s;
    s.kind = Kind::WeightedCylinder;
    s.weights = std::move(w);
    return s;
  }

  static InitialMetricSpec from_function(FunctionSpec<T> f) {
    if (f.depth == 0) throw Error(ErrorCode::ShapeMismatch, "function depth must be >= 1");
    InitialMetricSpec s;
    s.kind = Kind::FromFunction;
    s.func = std::move(f);
    return s;
  }

  std::size_t depth() const {
    switch (kind) {
      case Kind::DiscreteLevel0: return 1;
      case Kind::WeightedCylinder: return weights.size();
      case Kind::FromFunction: return func.depth;
    }
    return 1;
  }

  // ground distance between two depth-m histories
  T ground(const std::vector<int>& x, const std::vector<int>& y) const {
    switch (kind) {
      case Kind::DiscreteLevel0:
        return x[0] == y[0] ? T(0) : T(1);
      case Kind::WeightedCylinder: {
        T s(0);
        for (std::size_t j = 0; j < weights.size(); ++j)
          if (x[j] != y[j]) s += weights[j];
        return s;
      }
      case Kind::FromFunction:
        return abs_val(func.eval(x) - func.eval(y));
    }
    return T(0);
  }

  InitialMetricSpec scaled(const T& c) const {
    InitialMetricSpec s = *this;
    if (s.kind == Kind::DiscreteLevel0) {
      s = weighted_cylinder({c});
    } else if (s.kind == Kind::WeightedCylinder) {
      for (auto& w : s.weights) w = w * c;
    } else {
      for (auto& [k, v] : s.func.table) v = v * c;
      if (s.func.coord_index >= 0) {
        // materialize the coordinate table before scaling is meaningful
        throw Error(ErrorCode::ShapeMismatch, "cannot scale an implicit coordinate function");
      }
    }
    return s;
  }
};

enum class IterationSemantics { Kantorovich, TvRefresh };

inline const char* semantics_name(IterationSemantics s) {
  return s == IterationSemantics::Kantorovich ? "kantorovich" : "tv_refresh";
}

template <class T>
struct IterationLevel {
  std::size_t n = 0;
  Semimetric<T> d;          // on level-n states
  std::vector<T> marginal;  // mu_n
  T functional = T(0);      // I_n = sum mu(a) mu(b) d(a,b)
  T max_distance = T(0);
};

template <class T>
struct IterationReport {
  IterationSemantics semantics = IterationSemantics::Kantorovich;
  std::size_t first_level = 0;
  std::vector<IterationLevel<T>> levels;

  const IterationLevel<T>& at(std::size_t n) const {
    if (n < first_level || n >= first_level + levels.size())
      throw Error(ErrorCode::LevelMissing, "level " + std::to_string(n) + " not in report");
    return levels[n - first_level];
  }
  bool has(std::size_t n) const {
    return n >= first_level && n < first_level + levels.size();
  }
};

// One application of the metric-transfer operator: replace level-n states by
// their conditional laws over level n-1 and distances by transport cost.
template <class T>
Semimetric<T> transfer_semimetric(const Semimetric<T>& d_prev, const CotransitionKernel<T>& q,
                                  unsigned threads = 1) {
  if (d_prev.size() != q.rows.cols())
    throw Error(ErrorCode::DimensionMismatch, "ground semimetric size does not match kernel");
  const std::size_t n = q.rows.rows();
  Matrix<T> out(n, n, T(0));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < n; ++a) {
    if (!q.supported[a]) continue;
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!q.supported[b]) continue;
      pairs.emplace_back(a, b);
    }
  }
  std::vector<T> vals(pairs.size(), T(0));
  parallel_for(pairs.size(), threads, [&](std::size_t i) {
    const auto [a, b] = pairs[i];
    vals[i] = transport_lp(q.rows.row(a), q.rows.row(b), d_prev.matrix()).value;
  });
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out(pairs[i].first, pairs[i].second) = vals[i];
    out(pairs[i].second, pairs[i].first) = vals[i];
  }
  return Semimetric<T>::trusted(std::move(out));
}

namespace detail {

// positive-probability state paths (x_k, ..., x_{m-1}) of the model
template <class T>
std::vector<std::vector<int>> enumerate_profiles(const MarkovModel<T>& model, std::size_t k,
                                                 std::size_t m) {
  std::vector<std::vector<int>> out;
  const std::vector<T> mu = level_marginal(model, k).weights;
  std::vector<int> cur;
  auto rec = [&](auto&& self, std::size_t level) -> void {
    if (level == m) {
      out.push_back(cur);
      return;
    }
    const std::size_t count = model.state_count(level);
    for (std::size_t s = 0; s < count; ++s) {
      if (level == k) {
        if (mu[s] == T(0)) continue;
      } else {
        if (model.kernel(level - 1)(static_cast<std::size_t>(cur.back()), s) == T(0)) continue;
      }
      cur.push_back(static_cast<int>(s));
      self(self, level + 1);
      cur.pop_back();
    }
  };
  rec(rec, k);
  return out;
}

template <class T>
T pair_functional(const std::vector<T>& mu, const Semimetric<T>& d, T* max_out) {
  T total(0);
  T mx(0);
  for (std::size_t a = 0; a < mu.size(); ++a) {
    if (mu[a] == T(0)) continue;
    for (std::size_t b = 0; b < mu.size(); ++b) {
      if (mu[b] == T(0)) continue;
      total += mu[a] * mu[b] * d(a, b);
      if (d(a, b) > mx) mx = d(a, b);
    }
  }
  if (max_out) *max_out = mx;
  return total;
}

}  // namespace detail

// Successive transfers of the initial cylinder semimetric.
//
// kantorovich: depth-m initial data is first collapsed to a level-m state
// semimetric by m exact transfer steps over the conditional cylinder masses,
// then transferred level by level; the report covers levels m..N.
//
// tv_refresh: d_n(a,b) = TV(Q_n(a,.), Q_n(b,.)) computed independently at
// each level (diagnostic semantics; levels 1..N, the initial metric does not
// enter).
template <class T>
IterationReport<T> iterate(const MarkovModel<T>& model, const InitialMetricSpec<T>& init,
                           std::size_t N, IterationSemantics semantics, unsigned threads = 1) {
  if (N > model.horizon())
    throw Error(ErrorCode::HorizonExceeded, "iteration depth beyond model horizon");
  IterationReport<T> report;
  report.semantics = semantics;

  if (semantics == IterationSemantics::TvRefresh) {
    report.first_level = 1;
    for (std::size_t n = 1; n <= N; ++n) {
      auto q = cotransitions(model, n);
      const std::size_t sc = q.rows.rows();
      Matrix<T> d(sc, sc, T(0));
      for (std::size_t a = 0; a < sc; ++a) {
        if (!q.supported[a]) continue;
        for (std::size_t b = a + 1; b < sc; ++b) {
          if (!q.supported[b]) continue;
          T tv = total_variation(q.rows.row(a), q.rows.row(b));
          d(a, b) = tv;
          d(b, a) = tv;
        }
      }
      IterationLevel<T> lvl;
      lvl.n = n;
      lvl.d = Semimetric<T>::trusted(std::move(d));
      lvl.marginal = level_marginal(model, n).weights;
      lvl.functional = detail::pair_functional(lvl.marginal, lvl.d, &lvl.max_distance);
      report.levels.push_back(std::move(lvl));
    }
    return report;
  }

  const std::size_t m = init.depth();
  if (m == 0) throw Error(ErrorCode::ShapeMismatch, "initial metric depth must be >= 1");
  if (m > N)
    throw Error(ErrorCode::LevelTooSmall,
                "initial cylinder depth " + std::to_string(m) + " exceeds iteration depth");
  report.first_level = m;

  // ground data on level-0 profiles
  std::vector<std::vector<int>> profiles = detail::enumerate_profiles(model, 0, m);
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t i = 0; i < profiles.size(); ++i) index[profiles[i]] = i;
  Matrix<T> dist(profiles.size(), profiles.size(), T(0));
  for (std::size_t i = 0; i < profiles.size(); ++i)
    for (std::size_t j = i + 1; j < profiles.size(); ++j) {
      T g = init.ground(profiles[i], profiles[j]);
      dist(i, j) = g;
      dist(j, i) = g;
    }

  // collapse: profile transfers up to level m-1, then a state transfer to m
  for (std::size_t level = 1; level < m; ++level) {
    auto q = cotransitions(model, level);
    std::vector<std::vector<int>> next_profiles = detail::enumerate_profiles(model, level, m);
    std::map<std::vector<int>, std::size_t> next_index;
    for (std::size_t i = 0; i < next_profiles.size(); ++i) next_index[next_profiles[i]] = i;

    // conditional masses over the one-step extensions of a profile
    auto extensions = [&](const std::vector<int>& prof) {
      std::vector<std::pair<std::size_t, T>> ext;  // (old profile index, mass)
      const std::size_t head = static_cast<std::size_t>(prof.front());
      for (std::size_t c = 0; c < q.rows.cols(); ++c) {
        if (q.rows(head, c) == T(0)) continue;
        std::vector<int> full;
        full.reserve(prof.size() + 1);
        full.push_back(static_cast<int>(c));
        full.insert(full.end(), prof.begin(), prof.end());
        auto it = index.find(full);
        if (it == index.end())
          throw Error(ErrorCode::ShapeMismatch, "profile bookkeeping out of sync");
        ext.emplace_back(it->second, q.rows(head, c));
      }
      return ext;
    };

    Matrix<T> next_dist(next_profiles.size(), next_profiles.size(), T(0));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < next_profiles.size(); ++i)
      for (std::size_t j = i + 1; j < next_profiles.size(); ++j) pairs.emplace_back(i, j);
    std::vector<T> vals(pairs.size(), T(0));
    parallel_for(pairs.size(), threads, [&](std::size_t t) {
      const auto [i, j] = pairs[t];
      auto ei = extensions(next_profiles[i]);
      auto ej = extensions(next_profiles[j]);
      std::vector<T> ma, mb;
      for (auto& [pi, mass] : ei) ma.push_back(mass);
      for (auto& [pj, mass] : ej) mb.push_back(mass);
      Matrix<T> cost(ei.size(), ej.size());
      for (std::size_t x = 0; x < ei.size(); ++x)
        for (std::size_t y = 0; y < ej.size(); ++y) cost(x, y) = dist(ei[x].first, ej[y].first);
      vals[t] = transport_lp(ma, mb, cost).value;
    });
    for (std::size_t t = 0; t < pairs.size(); ++t) {
      next_dist(pairs[t].first, pairs[t].second) = vals[t];
      next_dist(pairs[t].second, pairs[t].first) = vals[t];
    }
    profiles = std::move(next_profiles);
    index = std::move(next_index);
    dist = std::move(next_dist);
  }

  // lift the level-(m-1) profile semimetric onto the full state space
  const std::size_t sc_prev = model.state_count(m - 1);
  Matrix<T> state_dist(sc_prev, sc_prev, T(0));
  for (std::size_t i = 0; i < profiles.size(); ++i)
    for (std::size_t j = 0; j < profiles.size(); ++j)
      state_dist(static_cast<std::size_t>(profiles[i][0]),
                 static_cast<std::size_t>(profiles[j][0])) = dist(i, j);
  Semimetric<T> cur = Semimetric<T>::trusted(std::move(state_dist));

  for (std::size_t n = m; n <= N; ++n) {
    cur = transfer_semimetric(cur, cotransitions(model, n), threads);
    IterationLevel<T> lvl;
    lvl.n = n;
    lvl.d = cur;
    lvl.marginal = level_marginal(model, n).weights;
    lvl.functional = detail::pair_functional(lvl.marginal, lvl.d, &lvl.max_distance);
    report.levels.push_back(std::move(lvl));
  }
  return report;
}

// --- decisions ----------------------------------------------------------------

enum class StandardnessVerdict { StandardEvidence, NonstandardEvidence, Inconclusive };

inline const char* verdict_name(StandardnessVerdict v) {
  switch (v) {
    case StandardnessVerdict::StandardEvidence: return "standard_evidence";
    case StandardnessVerdict::NonstandardEvidence: return "nonstandard_evidence";
    case StandardnessVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct StandardnessDecision {
  StandardnessVerdict verdict = StandardnessVerdict::Inconclusive;
  double last_functional = 0.0;
  std::string note;
};

// Finite-horizon evidence for the vanishing of I_n; never a limit claim.
// standard: I_n < tol and nonincreasing over the last `window` levels.
// nonstandard: I_n stabilized strictly above tol over the window.
template <class T>
StandardnessDecision decide_standardness(const IterationReport<T>& report, const T& tol,
                                         std::size_t window) {
  if (window == 0 || window > report.levels.size())
    throw Error(ErrorCode::WindowTooLarge, "decision window must fit the computed levels");
  std::vector<T> tail;
  for (std::size_t i = report.levels.size() - window; i < report.levels.size(); ++i)
    tail.push_back(report.levels[i].functional);

  bool below = true, nonincreasing = true, above = true, stable = true;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (!(tail[i] < tol)) below = false;
    if (!(tail[i] > tol)) above = false;
    if (i + 1 < tail.size()) {
      if (tail[i + 1] > tail[i]) nonincreasing = false;
      T step = abs_val(tail[i + 1] - tail[i]);
      if (!(step < tol) && !(step == T(0))) stable = false;
    }
  }

  StandardnessDecision d;
  d.last_functional = to_double(tail.back());
  if (below && nonincreasing) {
    d.verdict = StandardnessVerdict::StandardEvidence;
    d.note = "I_n below tolerance and nonincreasing on the decision window";
  } else if (above && stable) {
    d.verdict = StandardnessVerdict::NonstandardEvidence;
    d.note = "I_n stabilized strictly above tolerance on the decision window";
  } else {
    d.verdict = StandardnessVerdict::Inconclusive;
    d.note = "series neither vanishes nor stabilizes on the decision window";
  }
  return d;
}

template <class T>
struct ConcentrationResult {
  std::size_t vertex = 0;
  T ball_mass = T(0);
  bool concentrated = false;
};

// Limit-shape check: the vertex whose open eps-ball (in d_n) carries the
// most mass, succeeding when that mass reaches 1 - eps.
template <class T>
ConcentrationResult<T> concentration_check(const MarkovModel<T>& model,
                                           const IterationReport<T>& report, std::size_t n,
                                           const T& eps) {
  const IterationLevel<T>& lvl = report.at(n);
  const std::vector<T>& mu = lvl.marginal;
  ConcentrationResult<T> best;
  bool first = true;
  for (std::size_t v = 0; v < mu.size(); ++v) {
    if (mu[v] == T(0)) continue;
    T mass(0);
    for (std::size_t w = 0; w < mu.size(); ++w) {
      if (mu[w] == T(0)) continue;
      if (lvl.d(v, w) < eps) mass += mu[w];
    }
    if (first || mass > best.ball_mass) {
      best.vertex = v;
      best.ball_mass = mass;
      first = false;
    }
  }
  if (first) throw Error(ErrorCode::EmptyLevel, "no supported states at level");
  T thr = T(1) - eps;
  best.concentrated = best.ball_mass >= thr;
  (void)model;
  return best;
}

}  // namespace filtlab
