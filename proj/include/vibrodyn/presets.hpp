#ifndef VIBRODYN_PRESETS_HPP
#define VIBRODYN_PRESETS_HPP

#include <string>
#include <vector>

#include "vibrodyn/run_spec.hpp"

namespace vibrodyn {

/// Bundled parameter sets for the canonical figure regimes. Names:
/// fig1..fig6 are single runs, fig7a/fig7b are the collapse-time sweeps
/// over g and omega_v.
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
RunSpec preset(const std::string& name);   // throws ConfigError for unknown names
std::string preset_description(const std::string& name);

} // namespace vibrodyn

#endif
