#pragma once

#include <iosfwd>
#include <vector>

#include "fracdelay/dataset.hpp"
#include "fracdelay/run_config.hpp"

namespace fracdelay {

/// Validates the config and runs its command.  Most commands emit one
/// dataset; figure emits several.
std::vector<EmittedDataset> run(const RunConfig& cfg);

/// Datasets behind one of the six figures (1, 3: branch atlases; 2, 4:
/// boundary curves with their winding census; 5: b-a region curves and a
/// verdict grid; 6: Henon and Lozi sweeps).
std::vector<EmittedDataset> reproduce_figure(int figure, const RunConfig& cfg);

/// A single dataset goes to cfg.out (or `console` when out is empty).
/// Several datasets go to cfg.out as a directory, one file per dataset, or
/// to `console` one after another, each behind a "# name" line.
void write_datasets(const std::vector<EmittedDataset>& sets, const RunConfig& cfg, std::ostream& console);

}  // namespace fracdelay
