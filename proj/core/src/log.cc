/*
 * Copyright 2026 The FogType Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fog/log.h"

#include <iostream>
#include <mutex>
#include <utility>

namespace fog {
namespace {

std::mutex& SinkMutex() {
  static std::mutex mutex;
  return mutex;
}

WarningSink& Sink() {
  static WarningSink sink;
  return sink;
}

}  // namespace

WarningSink SetWarningSink(WarningSink sink) {
  std::lock_guard<std::mutex> lock(SinkMutex());
  return std::exchange(Sink(), std::move(sink));
}

void Warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(SinkMutex());
  if (Sink()) {
    Sink()(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

}  // namespace fog
