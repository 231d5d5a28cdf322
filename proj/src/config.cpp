#include "ppvl/config.hpp"

#include <fstream>
#include <sstream>

#include "ppvl/errors.hpp"

namespace ppvl {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

std::map<std::string, std::string> parseKeyValue(std::string_view text) {
    std::map<std::string, std::string> out;
    int lineNo = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineNo;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw DomainError("line " + std::to_string(lineNo) + ": expected key = value");
        }
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) throw DomainError("line " + std::to_string(lineNo) + ": empty key");
        out[std::string(key)] = std::string(trim(line.substr(eq + 1)));
    }
    return out;
}

std::map<std::string, std::string> readKeyValueFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parseKeyValue(buf.str());
}

} // namespace ppvl
