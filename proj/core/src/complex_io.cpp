#include "vorhom/complex.hpp"

#include <bit>
#include <cctype>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace vorhom {

namespace {

constexpr const char* kHeader = "vorhom-complex 1";

// Face signs here spell out every golden complex by hand; the cylinder is
// the two-square picture with the vertical edges s5, s6 glued.
constexpr const char* kCircle = R"(vorhom-complex 1
name circle
cell 0 a
cell 0 b
cell 1 e1 = +b -a
cell 1 e2 = +a -b
)";

constexpr const char* kCylinder = R"(vorhom-complex 1
name cylinder
cell 0 P
cell 0 Q
cell 0 R
cell 0 S
cell 1 s1 = +P -Q
cell 1 s2 = +P -Q
cell 1 s3 = +S -R
cell 1 s4 = +R -S
cell 1 s5 = +R -P
cell 1 s6 = +S -Q
cell 2 F1 = +s1 +s5 -s4 -s6
cell 2 F2 = -s2 +s6 -s3 -s5
)";

constexpr const char* kPuncturedPlane = R"(vorhom-complex 1
name punctured_plane
# square loop around the puncture; the plane minus a point retracts onto it
cell 0 v00
cell 0 v10
cell 0 v11
cell 0 v01
cell 1 bottom = +v10 -v00
cell 1 right = +v11 -v10
cell 1 top = +v01 -v11
cell 1 left = +v00 -v01
)";

constexpr const char* kDoublyPunctured = R"(vorhom-complex 1
name doubly_punctured
# figure-eight: one loop around each puncture, joined at v0
cell 0 v0
cell 0 v1
cell 0 v2
cell 1 a1 = +v1 -v0
cell 1 a2 = +v0 -v1
cell 1 b1 = +v2 -v0
cell 1 b2 = +v0 -v2
)";

constexpr const char* kSphere = R"(vorhom-complex 1
name sphere
cell 0 n
cell 0 s
cell 1 m1 = +n -s
cell 1 m2 = +n -s
cell 2 east = +m1 -m2
cell 2 west = +m2 -m1
)";

constexpr const char* kBall = R"(vorhom-complex 1
name ball
cell 0 n
cell 0 s
cell 1 m1 = +n -s
cell 1 m2 = +n -s
cell 2 east = +m1 -m2
cell 2 west = +m2 -m1
cell 3 interior = +east +west
)";

struct Golden {
  const char* name;
  const char* text;
  std::vector<int> betti;
};

const std::vector<Golden>& goldens() {
  static const std::vector<Golden> table = {
      {"circle", kCircle, {1, 1}},
      {"cylinder", kCylinder, {1, 1, 0}},
      {"punctured_plane", kPuncturedPlane, {1, 1}},
      {"doubly_punctured", kDoublyPunctured, {1, 2}},
      {"sphere", kSphere, {1, 0, 1}},
      {"ball", kBall, {1, 0, 0, 0}},
  };
  return table;
}

const Golden& find_golden(const std::string& name) {
  for (const auto& g : goldens()) {
    if (name == g.name) return g;
  }
  throw StructuralError("unknown golden complex '" + name + "'");
}

std::vector<std::pair<std::string, int>> split_words(const std::string& line) {
  std::vector<std::pair<std::string, int>> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size() || line[i] == '#') break;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    words.emplace_back(line.substr(start, i - start), static_cast<int>(start) + 1);
  }
  return words;
}

}  // namespace

CubicalComplex parse_complex(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_header = false;
  bool any_cells = false;
  ComplexBuilder builder;
  std::string name;

  while (std::getline(in, line)) {
    ++line_no;
    const auto words = split_words(line);
    if (words.empty()) continue;
    if (!have_header) {
      if (words.size() != 2 || words[0].first != "vorhom-complex") {
        throw ParseError("expected header 'vorhom-complex 1'", line_no, words[0].second);
      }
      if (words[1].first != "1") {
        throw ParseError("unsupported complex format version " + words[1].first, line_no, words[1].second);
      }
      have_header = true;
      continue;
    }
    const std::string& keyword = words[0].first;
    if (keyword == "name") {
      if (words.size() != 2) throw ParseError("'name' takes exactly one word", line_no, words[0].second);
      if (any_cells) throw ParseError("'name' must precede the cells", line_no, words[0].second);
      name = words[1].first;
      builder = ComplexBuilder(name);
      continue;
    }
    if (keyword != "cell") throw ParseError("unknown directive '" + keyword + "'", line_no, words[0].second);
    if (words.size() < 3) throw ParseError("expected 'cell <degree> <id>'", line_no, words[0].second);

    int degree = 0;
    try {
      std::size_t used = 0;
      degree = std::stoi(words[1].first, &used);
      if (used != words[1].first.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("cell degree must be an integer", line_no, words[1].second);
    }

    std::vector<SignedFace> faces;
    if (words.size() > 3) {
      if (words[3].first != "=") throw ParseError("expected '=' before the face list", line_no, words[3].second);
      if (words.size() == 4) throw ParseError("empty face list after '='", line_no, words[3].second);
      for (std::size_t w = 4; w < words.size(); ++w) {
        const auto& [token, column] = words[w];
        if (token.size() < 2 || (token[0] != '+' && token[0] != '-')) {
          throw ParseError("face terms look like +id or -id, got '" + token + "'", line_no, column);
        }
        faces.push_back(SignedFace{CubeId(token.substr(1)), token[0] == '+' ? 1 : -1});
      }
    }
    any_cells = true;
    try {
      builder.add_cube(degree, CubeId(words[2].first), std::move(faces));
    } catch (const StructuralError& e) {
      throw ParseError(e.what(), line_no, words[2].second);
    }
  }
  if (!have_header) throw ParseError("missing header 'vorhom-complex 1'", line_no, 1);
  return builder.build();
}

CubicalComplex load_complex(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open complex file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_complex(buf.str());
}

std::string serialize_complex(const CubicalComplex& complex) {
  std::string out = std::string(kHeader) + "\n";
  if (!complex.name().empty()) out += "name " + complex.name() + "\n";
  for (int k = 0; k <= complex.dimension(); ++k) {
    for (const auto& cell : complex.cubes(k)) {
      out += fmt::format("cell {} {}", k, cell.id.name);
      const auto& faces = complex.faces(cell.id);
      if (!faces.empty()) {
        out += " =";
        for (const auto& f : faces) out += fmt::format(" {}{}", f.sign > 0 ? '+' : '-', f.face.name);
      }
      out += "\n";
    }
  }
  return out;
}

CubicalComplex golden_complex(const std::string& name) { return parse_complex(find_golden(name).text); }

std::vector<std::string> golden_complex_names() {
  std::vector<std::string> names;
  for (const auto& g : goldens()) names.emplace_back(g.name);
  return names;
}

std::vector<int> golden_betti(const std::string& name) { return find_golden(name).betti; }

CubicalComplex grid_complex(const std::vector<int>& extents, const std::vector<bool>& periodic) {
  const int n = static_cast<int>(extents.size());
  if (n == 0 || n > 8) throw StructuralError("grid complexes need between 1 and 8 axes");
  for (int e : extents) {
    if (e < 1) throw StructuralError("grid extents must be positive");
  }
  auto is_periodic = [&](int a) { return a < static_cast<int>(periodic.size()) && periodic[static_cast<std::size_t>(a)]; };

  // Number of base positions along axis a for a cube that does (spans) or
  // does not extend along that axis.
  auto positions = [&](int a, bool spans) {
    const int e = extents[static_cast<std::size_t>(a)];
    return (spans || is_periodic(a)) ? e : e + 1;
  };
  auto cube_name = [&](unsigned mask, const std::vector<int>& base) {
    std::string s = fmt::format("q{}", mask);
    for (int v : base) s += fmt::format("_{}", v);
    return s;
  };

  std::string name = "grid";
  for (int a = 0; a < n; ++a) name += fmt::format("{}{}", a == 0 ? "_" : "x", extents[static_cast<std::size_t>(a)]);
  ComplexBuilder builder(name);

  for (int k = 0; k <= n; ++k) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (std::popcount(mask) != k) continue;
      std::vector<int> counts(static_cast<std::size_t>(n));
      long total = 1;
      for (int a = 0; a < n; ++a) {
        counts[static_cast<std::size_t>(a)] = positions(a, (mask >> a) & 1u);
        total *= counts[static_cast<std::size_t>(a)];
      }
      std::vector<int> base(static_cast<std::size_t>(n), 0);
      for (long idx = 0; idx < total; ++idx) {
        long rest = idx;
        for (int a = n - 1; a >= 0; --a) {
          base[static_cast<std::size_t>(a)] = static_cast<int>(rest % counts[static_cast<std::size_t>(a)]);
          rest /= counts[static_cast<std::size_t>(a)];
        }
        std::vector<SignedFace> faces;
        int slot = 0;
        for (int a = 0; a < n; ++a) {
          if (!((mask >> a) & 1u)) continue;
          const unsigned face_mask = mask & ~(1u << a);
          const int parity = (slot % 2 == 0) ? 1 : -1;
          std::vector<int> upper = base;
          upper[static_cast<std::size_t>(a)] += 1;
          if (is_periodic(a)) upper[static_cast<std::size_t>(a)] %= extents[static_cast<std::size_t>(a)];
          faces.push_back(SignedFace{cube_name(face_mask, base), -parity});
          faces.push_back(SignedFace{cube_name(face_mask, upper), parity});
          ++slot;
        }
        builder.add_cube(k, cube_name(mask, base), std::move(faces));
      }
    }
  }
  return builder.build();
}

}  // namespace vorhom
