// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include "gasplan/network.hpp"

namespace gasplan {

// Instance documents are JSON with top-level keys: meta {name, units,
// provenance}, nodes, pipes, compressors, slack_nodes, sound_speed.
// All numeric fields are SI decimals; ids are strings. The formal schema
// ships in docs/instance.schema.json.
Network load_instance(std::istream& in);
Network load_instance_file(const std::string& path);

// Inverse of load_instance: load_instance(serialize(net)) == net.
std::string serialize(const Network& net);

}  // namespace gasplan
