// Copyright 2025 The emul Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Emulators for terminals anywhere in a plane graph, and a terminal
// distance oracle built on them.

#pragma once

#include <string>
#include <vector>

#include "emul/division.hpp"
#include "emul/multihole.hpp"

namespace emul {

struct PipelineConfig {
  EmulatorParams emulator = EmulatorParams::Desk(0.25);
  DivisionParams division;
  // Size-reduction passes; 0 means max(1, ceil(log2 log2 k)).
  int iterations = 0;
  // Bootstrap: r_i = (log^(3-i) n)^bootstrap_a, and k <= n / log2(n)^bootstrap_d.
  double bootstrap_a = 2.0;
  double bootstrap_d = 2.0;
};

// One r-division at r, an emulator per piece with budget eps (a piece
// whose emulator would be larger is kept as it is), and glue.
Instance SizeReductionAt(const Instance& in, int r, double eps, const PipelineConfig& cfg,
                         EmulatorReport* report = nullptr);
// r = max(16, n / k).
Instance SizeReduction(const Instance& in, double eps, const PipelineConfig& cfg = {},
                       EmulatorReport* report = nullptr);

// A pass at eps/2 when n >= k^2, then L passes at eps/(2L); a pass that
// does not shrink the instance ends the loop.
Instance PlanarEmulator(const Instance& in, double eps, const PipelineConfig& cfg = {},
                        EmulatorReport* report = nullptr);

// Weights rounded to powers of 1 + eps/8, three r-division stages with
// increasing r, then a final size reduction; each stage has eps/4 and the
// rounding is paid from the last one. Throws PreconditionKTooLarge.
Instance BootstrapEmulator(const Instance& in, double eps, const PipelineConfig& cfg = {},
                           EmulatorReport* report = nullptr);
std::vector<int> BootstrapSchedule(int n, double a);

// mode: onehole, multihole, general, bootstrap.
Instance Emulate(const Instance& in, const std::string& mode, double eps,
                 const PipelineConfig& cfg = {}, EmulatorReport* report = nullptr);

class DistanceOracle {
 public:
  static DistanceOracle Build(const Instance& in, double eps, const std::string& mode = "onehole",
                              const PipelineConfig& cfg = {});
  // Throws UnknownTerminal.
  double Query(int t, int u) const;
  const Instance& emulator() const { return emulator_; }
  int k() const { return static_cast<int>(table_.size()); }

 private:
  Instance emulator_;
  std::vector<std::vector<double>> table_;
};

}  // namespace emul
