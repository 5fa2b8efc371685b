#include "casec/node_id.hpp"

#include <cctype>
#include <tuple>

namespace casec {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

std::optional<IdShape> parse_id_shape(std::string_view id) {
    if (id == "O") return IdShape{'O', 0, false, false, 0};
    if (id.size() < 2) return std::nullopt;
    char letter = id[0];
    if (letter != 'C' && letter != 'A' && letter != 'E' && letter != 'D') return std::nullopt;
    std::string_view rest = id.substr(1);
    auto dot = rest.find('.');
    std::string_view level_part = dot == std::string_view::npos ? rest : rest.substr(0, dot);
    if (!all_digits(level_part) || level_part.size() > 6) return std::nullopt;
    IdShape shape;
    shape.letter = letter;
    shape.level = 0;
    for (char c : level_part) shape.level = shape.level * 10 + (c - '0');
    if (dot == std::string_view::npos) {
        // bare "A2" form; C/E/D require an index
        if (letter != 'A') return std::nullopt;
        return shape;
    }
    std::string_view index_part = rest.substr(dot + 1);
    shape.has_index = true;
    if (index_part == "x") {
        if (letter != 'C') return std::nullopt;  // only claims use the .x convention
        shape.index_is_x = true;
        return shape;
    }
    if (!all_digits(index_part) || index_part.size() > 6) return std::nullopt;
    for (char c : index_part) shape.index = shape.index * 10 + (c - '0');
    return shape;
}

bool id_conforms(std::string_view id) { return parse_id_shape(id).has_value(); }

bool canonical_id_less(const NodeId& a, const NodeId& b) {
    auto sa = parse_id_shape(a.value);
    auto sb = parse_id_shape(b.value);
    auto key = [](const std::optional<IdShape>& s, const std::string& text) {
        // rank: O < conforming < everything else; x sorts last within a level
        int rank = !s ? 2 : (s->letter == 'O' ? 0 : 1);
        int level = s ? s->level : 0;
        int xflag = (s && s->index_is_x) ? 1 : 0;
        int index = s ? s->index : 0;
        return std::make_tuple(rank, level, xflag, index, std::string_view(text));
    };
    return key(sa, a.value) < key(sb, b.value);
}

}  // namespace casec
