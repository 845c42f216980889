// Copyright 2026 The motionfuse Authors.
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

#pragma once

#include <span>

#include "motionfuse/core.hpp"

namespace motionfuse {

/// Drops track points that leave their object's mask or come within
/// `edge_margin` pixels of the image border, then drops tracks left with
/// fewer than `min_points` points. Points on frames without a label map are
/// dropped.
TrackSet sanitize_tracks(const TrackSet& tracks, std::span<const LabelMap> masks,
                         double edge_margin, int min_points);

}  // namespace motionfuse
