#pragma once

#include <map>
#include <string>
#include <string_view>

namespace ppvl {

/// Parses `key = value` lines; '#' starts a comment, blank lines ignored.
/// Later keys override earlier ones. Throws DomainError on malformed lines.
std::map<std::string, std::string> parseKeyValue(std::string_view text);

std::map<std::string, std::string> readKeyValueFile(const std::string& path);

} // namespace ppvl
