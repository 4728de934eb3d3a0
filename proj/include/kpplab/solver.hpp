#pragma once

#include <functional>
#include <vector>

#include "kpplab/geometry.hpp"
#include "kpplab/grid.hpp"
#include "kpplab/reaction.hpp"

namespace kpplab {

enum class Scheme { ExplicitEuler, Imex };
enum class Boundary { NeumannZero, DirichletFrozen };

struct SolverConfig {
    double dt = 1e-3;
    Scheme scheme = Scheme::ExplicitEuler;
    Boundary boundary = Boundary::NeumannZero;
    double snapshot_every = 1.0;
    double horizon = 1.0;
    int threads = 1;  // 0 resolves KPPLAB_THREADS, else sequential reference
};

int resolve_threads(int requested);

// Largest |f'| on [0,1], sampled; bounds the reaction substep of IMEX.
double max_reaction_slope(const ReactionFn& f);

// cell value = 1 iff the cell center lies in U; time = 0.
GridField rasterize(const SetDescriptor& U, const GridSpec& grid);

// Scratch buffers reused across steps.
struct SolverWorkspace {
    std::vector<double> tmp;
    std::vector<double> frozen;  // initial values, kept for DirichletFrozen
    bool frozen_valid = false;
    long step_index = 0;  // drives the IMEX axis-order alternation
};

// Advances one time step in place. Throws ConfigError on a CFL violation and
// DivergenceError if the state leaves [0,1] by more than 1e-9 or goes
// non-finite (checked when `validate` is set).
void step(GridField& state, const ReactionFn& f, const SolverConfig& cfg, SolverWorkspace& ws,
          bool validate = true);

// Runs to cfg.horizon, emitting snapshots (including t=0 and the final state)
// to the sink every cfg.snapshot_every time units.
GridField run(GridField u0, const ReactionFn& f, const SolverConfig& cfg,
              const std::function<void(const GridField&)>& sink = {});

// min over time of min over cells of (uB - uA); >= -1e-8 for a correct
// scheme when uA(0) <= uB(0). Throws on grid or time mismatch.
double compare_runs(const std::vector<GridField>& uA, const std::vector<GridField>& uB);

}  // namespace kpplab
