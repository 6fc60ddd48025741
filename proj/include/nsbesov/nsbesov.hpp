#pragma once

/// Umbrella header for the nsbesov library: periodic pseudo-spectral fields,
/// dyadic (Littlewood-Paley) analysis, Besov and Chemin-Lerner norms, heat
/// flow, the mild Navier-Stokes solver, lifespan estimates, and the
/// experiment harnesses.

#include <nsbesov/grid.hpp>
#include <nsbesov/rng.hpp>
#include <nsbesov/fft.hpp>
#include <nsbesov/field.hpp>
#include <nsbesov/ops.hpp>
#include <nsbesov/dyadic.hpp>
#include <nsbesov/besov.hpp>
#include <nsbesov/trajectory.hpp>
#include <nsbesov/chemin_lerner.hpp>
#include <nsbesov/paraproduct.hpp>
#include <nsbesov/generators.hpp>
#include <nsbesov/heat.hpp>
#include <nsbesov/picard.hpp>
#include <nsbesov/lifespan.hpp>
#include <nsbesov/snapshot.hpp>
#include <nsbesov/config.hpp>
#include <nsbesov/report.hpp>
#include <nsbesov/experiments.hpp>
