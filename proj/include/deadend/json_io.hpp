#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "deadend/group.hpp"
#include "deadend/word.hpp"

namespace deadend {

using Json = nlohmann::json;

inline constexpr std::string_view kSchemaVersion = "deadend/1";

// Objects are emitted with sorted keys; integers are decimal strings.

Json to_json(const Group& g);
Group group_from_json(const Json& j);

Json element_to_json(const Group& g, const Element& x);
Element element_from_json(const Group& g, const Json& j);

Json to_json(const GeneratingSet& gens);
GeneratingSet gens_from_json(const Json& j);

Json word_to_json(const Word& w);
Word word_from_json(const Json& j);

/// Reads a group spec: "table:<path>" loads a JSON table file, anything else
/// goes through Group::parse.
Group load_group(std::string_view spec, int int_bits = Group::kDefaultIntBits);

}  // namespace deadend
