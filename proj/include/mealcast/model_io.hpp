#pragma once

#include <iosfwd>
#include <string>

#include "mealcast/network.hpp"

namespace mealcast {

/// Text model format, version 1:
///
///   mealcast-model 1
///   topology 8-10-10-1
///   activations logsig logsig tansig
///   target_bounds <min> <max>
///   layer <index> <outputs> <inputs>
///   <outputs lines of <inputs> weights>
///   <one line of <outputs> biases>
///   ... one block per layer ...
///   codebooks <count>
///   <feature>=<label>|<label>|...
///   end
///
/// Reals are written in shortest round-trip form, so load(save(m)) is exact.
void write_model(std::ostream& out, const MlpModel& m);
MlpModel read_model(std::istream& in);

void save_model(const MlpModel& m, const std::string& path);
MlpModel load_model(const std::string& path);

}  // namespace mealcast
