#pragma once

#include <string>

#include "p2d2/planner.hpp"

namespace p2d2 {

/// Line-delimited JSON persistence for demonstration sets and trees.
///
/// Files are self-describing: the first line is a header record carrying a
/// schema tag, schema version, environment name, a hash of the environment
/// constants, and the planner configuration; each following line is one
/// trajectory (`.demos`) or one tree node (`.tree`). Doubles are written in
/// shortest round-trip form, so load(save(x)) restores every float bit for
/// bit and replay validation still holds on the loaded copy.
///
/// Loaders throw std::runtime_error naming the offending field on schema,
/// version, or constants-hash mismatches.

std::string serialize_demos(const DemoSet& set);
DemoSet parse_demos(const std::string& text);
void save_demos(const DemoSet& set, const std::string& path);
DemoSet load_demos(const std::string& path);

std::string serialize_tree(const Tree& tree);
Tree parse_tree(const std::string& text);
void save_tree(const Tree& tree, const std::string& path);
Tree load_tree(const std::string& path);

/// Flat CSV of a demonstration set, one row per timestep:
/// traj,t,state...,action...,reward (action/reward empty on each final row).
std::string demos_csv(const DemoSet& set);

/// Writes text to path, throwing on failure.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace p2d2
