// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#include "tca/term.hpp"

#include <stdexcept>

namespace tca {

bool is_valid_message(std::string_view text) noexcept {
    if (text.empty()) return false;
    return text.find('\n') == std::string_view::npos &&
           text.find('\r') == std::string_view::npos;
}

void require_valid_message(std::string_view text) {
    if (text.empty())
        throw std::invalid_argument("message: empty");
    if (!is_valid_message(text))
        throw std::invalid_argument("message: contains a line terminator");
}

Message make_term(const std::string& name, const std::vector<std::string>& args) {
    require_valid_message(name);
    if (args.empty()) return name;
    std::string out = name;
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i].find('\n') != std::string::npos ||
            args[i].find('\r') != std::string::npos)
            throw std::invalid_argument("make_term: argument contains a line terminator");
        if (i > 0) out += ", ";
        out += args[i];
    }
    out += ')';
    return out;
}

std::string frame_encode(const Message& m) {
    require_valid_message(m);
    return m + '\n';
}

void LineDecoder::feed(const char* data, std::size_t len) {
    buf_.append(data, len);
}

std::optional<std::string> LineDecoder::next() {
    auto pos = buf_.find('\n');
    if (pos == std::string::npos) return std::nullopt;
    std::string line = buf_.substr(0, pos);
    buf_.erase(0, pos + 1);
    return line;
}

std::optional<std::string> LineDecoder::finish() {
    if (buf_.empty()) return std::nullopt;
    std::string tail = std::move(buf_);
    buf_.clear();
    return tail;
}

DecodeResult frame_decode(std::string_view bytes) {
    DecodeResult result;
    LineDecoder dec;
    dec.feed(bytes);
    while (auto line = dec.next()) result.messages.push_back(std::move(*line));
    result.truncated_tail = dec.finish();
    return result;
}

namespace {

constexpr const char* kRecEvent = "rec-event";
constexpr const char* kRecValue = "rec-value";

bool is_builtin(const std::string& name) {
    return name == kRecEvent || name == kRecValue;
}

} // namespace

PatternTable::PatternTable() {
    entries_.emplace(kRecEvent, std::regex(R"(^snd-event\((.+)\)$)"));
    entries_.emplace(kRecValue, std::regex(R"(^snd-value\((.+)\)$)"));
}

bool PatternTable::is_anchored(std::string_view pattern) noexcept {
    if (pattern.size() < 2) return false;
    if (pattern.front() != '^' || pattern.back() != '$') return false;
    // A '$' preceded by an odd number of backslashes is a literal, not an anchor.
    std::size_t backslashes = 0;
    for (std::size_t i = pattern.size() - 1; i-- > 0;) {
        if (pattern[i] == '\\') ++backslashes;
        else break;
    }
    return backslashes % 2 == 0;
}

void PatternTable::define(const std::string& name, const std::string& pattern) {
    if (is_builtin(name))
        throw std::invalid_argument("pattern table: cannot redefine built-in '" + name + "'");
    if (!is_anchored(pattern))
        throw std::invalid_argument("pattern table: pattern for '" + name +
                                    "' must be anchored at both ends");
    std::regex re;
    try {
        re = std::regex(pattern);
    } catch (const std::regex_error& e) {
        throw std::invalid_argument("pattern table: bad pattern for '" + name + "': " + e.what());
    }
    entries_[name] = std::move(re);
}

std::optional<std::vector<std::string>> PatternTable::match(const std::string& pattern_name,
                                                            const Message& line) const {
    auto it = entries_.find(pattern_name);
    if (it == entries_.end())
        throw std::out_of_range("pattern table: unknown pattern '" + pattern_name + "'");
    std::smatch sm;
    if (!std::regex_match(line, sm, it->second)) return std::nullopt;
    std::vector<std::string> captures;
    captures.reserve(sm.size() > 0 ? sm.size() - 1 : 0);
    for (std::size_t i = 1; i < sm.size(); ++i) captures.push_back(sm[i].str());
    return captures;
}

bool PatternTable::contains(const std::string& name) const {
    return entries_.count(name) != 0;
}

} // namespace tca
