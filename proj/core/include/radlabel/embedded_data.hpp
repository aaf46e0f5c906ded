#pragma once

#include <string_view>

namespace radlabel {

// Contents of core/data/default_lexicon.toml as compiled into the library.
std::string_view default_lexicon_text();

// Contents of core/data/deid_patterns.json as compiled into the library.
std::string_view default_deid_patterns_text();

}  // namespace radlabel
