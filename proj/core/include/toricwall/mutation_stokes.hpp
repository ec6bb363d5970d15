#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "toricwall/cohomology_k.hpp"
#include "toricwall/lg_model.hpp"

namespace tw {

// Vectors live in an ambient space with a bilinear form: [x, y) = x^T B y.
// In K-class mode the ambient space is the cohomology ring (vectors are Chern
// characters, B the Riemann-Roch form); in abstract mode it is Z^N with a
// given integer Gram matrix and vectors start as unit vectors.
struct MarkedReflectionSystem {
  QMat form;
  std::vector<QVec> vectors;
  std::vector<std::string> labels;
  std::vector<cplx> markings;
  double phase = 0;

  static MarkedReflectionSystem from_classes(const ChowRing& ring, const std::vector<KClass>& classes,
                                             std::vector<cplx> markings, double phase);
  static MarkedReflectionSystem abstract(const ZMat& gram, std::vector<std::string> labels, std::vector<cplx> markings,
                                         double phase);

  int size() const { return static_cast<int>(vectors.size()); }
  Q pair(int i, int j) const;
  Q pair(const QVec& x, const QVec& y) const;
  // indices sorted by decreasing Im(e^{-i phase} u), ties by index
  std::vector<int> order() const;
};

bool admissible(double phase, const std::vector<cplx>& markings, double tol_adm = 1e-9);

struct StokesData {
  std::vector<int> order;
  ZMat gram;  // in that order
};
// Throws NotSemiorthogonal if the ordered Gram matrix is not unipotent upper-triangular.
StokesData stokes_matrix(const MarkedReflectionSystem& m);

enum class Direction { Left, Right };
std::string to_string(Direction d);

// Right: v_i -= [v_i, v_j) v_j.  Left: v_i -= [v_j, v_i) v_j.
MarkedReflectionSystem mutate(const MarkedReflectionSystem& m, int i, int j, Direction d);

struct MutationEvent {
  int step = 0;
  double s = 0;
  int moving = -1, pivot = -1;
  Direction direction = Direction::Left;
  bool pass_through = false;  // orthogonal pair, order swap only
  std::string before, after, pivot_label;
};

struct EvolveOptions {
  double bisection_tol = 1e-10;
  double simultaneous_tol = 1e-9;
  double equal_marking_tol = 1e-9;
};

struct EvolveResult {
  MarkedReflectionSystem system;
  std::vector<MutationEvent> events;
};

// Move the markings along the trajectory (branch i carries vector i) at a fixed
// phase, mutating whenever a marking crosses the ray u_j + R_{>0} e^{i phase}.
EvolveResult evolve(const MarkedReflectionSystem& start, const Trajectory& tr, const EvolveOptions& opt = {});

// Same engine on a callback giving the markings at grid and intermediate
// parameters (used for reversed paths and synthetic data).
using MarkingPath = std::function<std::vector<cplx>(double s)>;
EvolveResult evolve_markings(const MarkedReflectionSystem& start, const MarkingPath& path, int steps,
                             const EvolveOptions& opt = {});

struct Cluster {
  std::vector<int> members;  // branch indices
  bool divergent = false;
};
// Split endpoint markings into the convergent family and divergent clusters by
// continuing the family further along the path direction: divergent values grow.
std::vector<Cluster> classify_clusters(const Trajectory& tr, cplx v_further, double growth = 1.5);

struct OrlovEvolutionReport {
  bool ok = false;
  std::vector<int> block_sizes;   // in decreasing Im order of the clusters
  std::vector<int> block_index;   // for divergent blocks: k with O(-kE) twist; -999 for the convergent block
  int h = -1;                     // number of divergent blocks above the convergent one
  std::string detail;
};

// K-class mode: check that the convergent block spans phi^* K(X_-) and each
// divergent cluster spans one K(Z)_k, all blocks unimodular.
OrlovEvolutionReport verify_orlov_evolution(const ChowRing& plus, const ChowRing& minus, const WallCrossing& wall,
                                            const MarkedReflectionSystem& end, const std::vector<Cluster>& clusters);
// Abstract mode: block ranks only.
OrlovEvolutionReport verify_orlov_evolution_ranks(const MarkedReflectionSystem& end, const std::vector<Cluster>& clusters,
                                                  int expected_convergent, int expected_divergent);

}  // namespace tw
