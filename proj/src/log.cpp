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

#include "fpif/log.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <memory>
#include <mutex>
#include <string_view>

namespace fpif::log {

namespace {

spdlog::level::level_enum level_from_env() {
  const char* env = std::getenv("FPIF_LOG");
  if (env == nullptr) return spdlog::level::err;
  const std::string_view v(env);
  if (v == "debug") return spdlog::level::debug;
  if (v == "info") return spdlog::level::info;
  if (v == "warn") return spdlog::level::warn;
  return spdlog::level::err;
}

spdlog::logger& logger() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto l = std::make_shared<spdlog::logger>(
        "fpif", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    l->set_pattern("fpif [%l] %v");
    l->set_level(level_from_env());
    return l;
  }();
  return *instance;
}

}  // namespace

void warn(const std::string& message) { logger().warn(message); }
void info(const std::string& message) { logger().info(message); }
void debug(const std::string& message) { logger().debug(message); }
void error(const std::string& message) { logger().error(message); }

void reload_level() { logger().set_level(level_from_env()); }

}  // namespace fpif::log
