#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace casec {

// Node identifier within a safety case ("O", "C3.1", "A2", "E5.2", "C4.x", ...).
struct NodeId {
    std::string value;

    NodeId() = default;
    NodeId(std::string v) : value(std::move(v)) {}
    NodeId(const char* v) : value(v) {}

    bool operator==(const NodeId&) const = default;
    auto operator<=>(const NodeId&) const = default;

    bool empty() const { return value.empty(); }
    const std::string& str() const { return value; }
};

// Decomposed form of a convention-conforming id. The conforming grammar is
//   O | C<level>.<index|x> | A<level>[.<index>] | E<level>.<index> | D<level>.<index>
// Ids outside this shape are legal (naming is warning-level, rule V11) but
// sort after conforming ones.
struct IdShape {
    char letter = '\0';       // 'O', 'C', 'A', 'E' or 'D'
    int level = 0;            // numeric level ("C3.1" -> 3); 0 for "O"
    bool has_index = false;
    bool index_is_x = false;  // "C4.x"
    int index = 0;
};

std::optional<IdShape> parse_id_shape(std::string_view id);

// True when the id matches the recommended grammar above.
bool id_conforms(std::string_view id);

// Level-aware canonical order: "O" first, then conforming ids by
// (level, index) with ".x" last within its level, ties and nonconforming
// ids broken lexicographically. Total order over all strings.
bool canonical_id_less(const NodeId& a, const NodeId& b);

struct CanonicalIdLess {
    bool operator()(const NodeId& a, const NodeId& b) const { return canonical_id_less(a, b); }
};

}  // namespace casec

template <>
struct std::hash<casec::NodeId> {
    size_t operator()(const casec::NodeId& id) const noexcept {
        return std::hash<std::string>{}(id.value);
    }
};
