#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "hiernet/guarded_net.hpp"
#include "hiernet/hierarchy.hpp"
#include "hiernet/petri_net.hpp"

namespace hiernet::testing {

std::filesystem::path fixture(const std::string& name);

/// t: p1 -> p2, v: p2 -> p3 + p4, u: p3 -> p4.
PetriNet basic_net();

/// f: A -> B with legs s1 blue/green, s2 red/green, s3 red/green;
/// g: B -> C with z1 yellow/brown, z2 yellow/purple.
GuardedNet colour_guard_net();

/// Same shape as colour_guard_net with paths blue->green, red->green, yellow->purple.
GuardedNet colour_paths_net();

/// Chain c -u1-> d -u2-> e.
PetriNet chain_child();

/// P1 -t1-> P2 with t1 bound to chain_child, play (x) = {c:1}, stop (y) = {e:1}.
HierarchicalNet forwarding_parent(std::shared_ptr<const NetDef> child);

/// Parent P1 -f-> P2 -g-> P3; f runs child x -w-> y, g runs c -u1|u2-> d.
HierarchicalNet two_children_net();

}  // namespace hiernet::testing
