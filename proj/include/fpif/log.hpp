// Copyright 2026 The fpif Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Diagnostics on stderr. The level comes from FPIF_LOG (error, info, debug);
// the default is error, so library calls stay silent unless asked.

#pragma once

#include <string>

namespace fpif::log {

void warn(const std::string& message);
void info(const std::string& message);
void debug(const std::string& message);
void error(const std::string& message);

// Re-reads FPIF_LOG.
void reload_level();

}  // namespace fpif::log
