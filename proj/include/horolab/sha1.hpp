#pragma once

#include <string>
#include <string_view>

namespace horolab {

std::string sha1_hex(std::string_view data);

/// git-style blob hash: sha1("blob <len>\0" + data)
std::string git_blob_hash(std::string_view data);

} // namespace horolab
