#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "hiernet/petri_net.hpp"

namespace hiernet {

/// PNML (2009 core model, P/T nets). XML ids are generated (`p0`, `t0`,
/// `a0`, ...); engine ids travel in the `<name><text>` labels. Every arc carries
/// an `<inscription>` with its weight.
std::string to_pnml(const PetriNet& net, const Marking& initial, std::string_view net_name = "net");
void export_pnml(const PetriNet& net, const Marking& initial, const std::filesystem::path& path);

struct PnmlDocument {
  PetriNet net;
  Marking initial;
};

/// Reads a P/T net, looking through nested pages. Parallel arcs add up.
/// Throws ValidationError on malformed documents.
PnmlDocument from_pnml(std::string_view xml);
PnmlDocument import_pnml(const std::filesystem::path& path);

}  // namespace hiernet
