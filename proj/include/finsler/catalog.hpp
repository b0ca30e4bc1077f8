#pragma once

#include <string>
#include <vector>

#include "finsler/change.hpp"
#include "finsler/metric.hpp"

namespace finsler {

// Declarative catalog of metrics, changes, and sampling parameters; the text
// grammar is a flat list of named blocks (see README for the full syntax):
//
//   metric euclid2 { kind euclidean  dim 2 }
//   change randers { family randers  sigma "0"  b "0.2" "0.1" }
//   sampling { count 20  seed 7  xbox -0.5 0.5  ybox 0.5 2.0 }
struct Catalog {
  struct MetricEntry {
    std::string label;
    MetricSpec spec;
  };
  struct ChangeEntry {
    std::string label;
    ChangeSpec spec;
  };

  std::vector<MetricEntry> metrics;
  std::vector<ChangeEntry> changes;
  int samples = 20;
  uint64_t seed = 7;
  SampleBox box;

  const MetricSpec* find_metric(const std::string& label) const;
  const ChangeSpec* find_change(const std::string& label) const;
};

// Parse a catalog document; throws parse_error with a byte offset on syntax
// problems and config_error on semantic ones (duplicate labels, bad kinds).
Catalog parse_catalog(const std::string& text);
Catalog load_catalog_file(const std::string& path);

// The built-in catalog: euclid2/3, riem2/3 (diag 1, 1 + x_{i-1}^2),
// quartic2/3/5 bases; randers, kropina, energy(2,3), generalized-randers,
// beta-conformal (sigma = 0.1 x1), a custom expression change, and the two
// projective witnesses (gradient and rotational one-forms).
Catalog builtin_catalog();

struct CatalogCheckResult {
  bool ok = true;
  std::vector<std::string> notes;
};

// Label uniqueness, expression parses, and per-metric homogeneity checks.
CatalogCheckResult check_catalog(const Catalog& cat);

}  // namespace finsler
