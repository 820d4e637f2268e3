#pragma once

#include "modal/clustering.hpp"
#include "modal/level_set.hpp"
#include "modal/modes.hpp"
#include "modal/regression.hpp"
#include "modal/sample.hpp"
#include "modal/sizer.hpp"

#include <string>

namespace modal::svg {

// All renderers draw on a fixed 800x600 canvas with a fixed palette and
// fixed number formatting, so equal inputs give byte-identical output.
std::string render(const SizerMap& map);
std::string render(const std::vector<PersistencePair>& diagram);
std::string render(const ModeTree& tree);
std::string render(const ModalCurveSet& curves, const Sample& joint);
std::string render(const Partition& partition, const Sample& points);

} // namespace modal::svg
