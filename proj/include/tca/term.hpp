// Part of tca, a tool-coordination runtime.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace tca {

// One line of term text, e.g. "snd-event(quit)". A valid message is
// non-empty and contains no line-terminator character; the newline is
// reserved for framing.
using Message = std::string;

bool is_valid_message(std::string_view text) noexcept;
void require_valid_message(std::string_view text); // throws std::invalid_argument

// Renders "name" when args is empty, otherwise "name(a1, a2, ...)".
// Outbound rendering is canonical: no space after the name, ", " joins.
Message make_term(const std::string& name, const std::vector<std::string>& args);

// ---------------------------------------------------------------------
// Line framing: one message per newline-terminated line, UTF-8.

// Appends exactly one '\n'.
std::string frame_encode(const Message& m);

// Incremental decoder over a byte stream of newline-terminated frames.
// next() yields complete lines with the terminator stripped and returns
// nullopt when no complete line is buffered -- distinct from an empty
// line, which yields an empty string. finish() hands back any trailing
// unterminated fragment so the caller can report it before discarding.
class LineDecoder {
public:
    void feed(const char* data, std::size_t len);
    void feed(std::string_view data) { feed(data.data(), data.size()); }
    std::optional<std::string> next();
    std::optional<std::string> finish();

private:
    std::string buf_;
};

struct DecodeResult {
    std::vector<Message> messages;
    std::optional<std::string> truncated_tail; // discarded unterminated fragment
};

DecodeResult frame_decode(std::string_view bytes);

// ---------------------------------------------------------------------
// Named anchored extraction patterns for destructuring inbound lines.
//
// The built-in entries "rec-event" and "rec-value" accept exactly the
// tool lines `snd-event(X)` / `snd-value(X)` for non-empty X; they are
// always present and cannot be redefined. Application patterns may be
// added with define(); every pattern must be anchored at both ends.
//
// A table is safe to share across processes once fully defined; match()
// is const and takes no locks.
class PatternTable {
public:
    PatternTable();

    // Throws std::invalid_argument on an unanchored pattern or an attempt
    // to redefine a built-in. Redefining an application pattern replaces it.
    void define(const std::string& name, const std::string& pattern);

    // Whole-line match: capture-group contents on success, nullopt when the
    // line does not match. An unknown pattern name is a programming mistake
    // and throws std::out_of_range.
    std::optional<std::vector<std::string>> match(const std::string& pattern_name,
                                                  const Message& line) const;

    bool contains(const std::string& name) const;

    // True when the pattern starts with '^' and ends with an unescaped '$'.
    static bool is_anchored(std::string_view pattern) noexcept;

private:
    std::map<std::string, std::regex> entries_;
};

} // namespace tca
