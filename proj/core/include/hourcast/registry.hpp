#pragma once

#include <memory>
#include <string>

#include "hourcast/config.hpp"
#include "hourcast/forecaster.hpp"

namespace hourcast {

/// Instantiates a registered model with its settings from the run config.
/// Throws ConfigError for unknown names.
std::unique_ptr<Forecaster> make_forecaster(const std::string& name, const RunConfig& cfg);

}  // namespace hourcast
