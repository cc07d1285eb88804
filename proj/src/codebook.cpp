#include "mealcast/codebook.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "mealcast/error.hpp"
#include "text_util.hpp"

namespace mealcast {

double normalize(double v, const NormBounds& b) {
  if (!(b.v_max > b.v_min)) throw validation_error("degenerate normalization bounds: v_max must exceed v_min");
  return (v - b.v_min) / (b.v_max - b.v_min);
}

double denormalize(double v_n, const NormBounds& b) {
  if (!(b.v_max > b.v_min)) throw validation_error("degenerate normalization bounds: v_max must exceed v_min");
  return b.v_min + v_n * (b.v_max - b.v_min);
}

Codebook::Codebook(std::string feature, std::vector<std::string> labels)
    : feature_(std::move(feature)), labels_(std::move(labels)) {
  if (feature_.empty()) throw validation_error("codebook feature name is empty");
  if (labels_.size() < 2) throw validation_error("codebook '" + feature_ + "' needs at least two labels");
  std::set<std::string_view> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw validation_error("codebook '" + feature_ + "' has an empty label");
    if (!seen.insert(l).second) throw validation_error("codebook '" + feature_ + "' repeats label '" + l + "'");
  }
}

std::optional<int> Codebook::code(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<int>(it - labels_.begin()) + 1;
}

NormBounds Codebook::bounds() const { return {1.0, static_cast<double>(labels_.size())}; }

double Codebook::normalized(int code) const {
  if (code < 1 || code > static_cast<int>(labels_.size()))
    throw validation_error("code " + std::to_string(code) + " out of range for feature '" + feature_ + "'");
  return normalize(static_cast<double>(code), bounds());
}

double Codebook::normalized(std::string_view label) const {
  const auto c = code(label);
  if (!c) throw validation_error("unknown label '" + std::string(label) + "' for feature '" + feature_ + "'");
  return normalized(*c);
}

Codebooks build_codebooks() {
  return {
      Codebook("soup", {"Mercimek Çorbası", "Ezogelin Çorbası", "Domates Çorbası", "Yayla Çorbası",
                        "Şehriye Çorbası", "Tarhana Çorbası", "Erişte Çorbası", "Ayran Aşı Çorbası",
                        "Brokoli Çorbası"}),
      Codebook("main_dish", {"Kuru Fasulye", "Bamya", "Sulu Köfte", "Sebze Dolması", "Mantı", "Türlü",
                             "Patlıcan Musakka", "Tavuk Pirzola", "Çiftlik Kebabı", "Kadın Budu Köfte Patates",
                             "Pürelü Dana Rostu", "Güveç", "Ispanak", "Balık"}),
      Codebook("side_dish", {"Pirinç Pilavı", "Bulgur Pilavı", "Makarna", "Su Böreği"}),
      Codebook("side_helper", {"Salata", "Tatlı", "Turşu", "Meyve"}),
      Codebook("beverage", {"Su", "Ayran", "Kola", "Soda"}),
      Codebook("weekday", {"Pazartesi", "Salı", "Çarşamba", "Perşembe", "Cuma", "Cumartesi", "Pazar"}),
      // Var (holiday present) = 1 -> 0.0, Yok = 2 -> 1.0
      Codebook("holiday", {"Var", "Yok"}),
      Codebook("season", {"Sonbahar", "Kış", "İlkbahar", "Yaz"}),
  };
}

void write_codebooks(std::ostream& out, const Codebooks& books) {
  for (const auto& b : books) {
    out << b.feature() << '=';
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (i) out << '|';
      out << b.labels()[i];
    }
    out << '\n';
  }
}

Codebooks read_codebooks(std::istream& in) {
  Codebooks books;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos)
      throw validation_error("codebook line " + std::to_string(lineno) + ": expected feature=labels");
    std::vector<std::string> labels;
    for (auto l : detail::split(t.substr(eq + 1), '|')) labels.emplace_back(detail::trim(l));
    books.emplace_back(std::string(detail::trim(t.substr(0, eq))), std::move(labels));
  }
  return books;
}

Codebooks load_codebooks(const std::string& path) {
  std::istringstream in(detail::read_file(path));
  auto books = read_codebooks(in);
  check_codebook_schema(books);
  return books;
}

void check_codebook_schema(const Codebooks& books) {
  if (books.size() != kFeatureCount)
    throw validation_error("expected " + std::to_string(kFeatureCount) + " codebooks, got " +
                           std::to_string(books.size()));
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (books[i].feature() != kFeatureNames[i])
      throw validation_error("codebook " + std::to_string(i) + " is '" + books[i].feature() + "', expected '" +
                             std::string(kFeatureNames[i]) + "'");
  }
}

}  // namespace mealcast
