#pragma once

#include <string_view>

namespace genmine {

// Contents of data/blocklist.txt and data/stopwords.txt, baked in at build time.
std::string_view default_blocklist_text();
std::string_view default_stopwords_text();

}  // namespace genmine
