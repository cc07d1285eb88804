#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mealcast {

inline constexpr std::size_t kFeatureCount = 8;

/// Column order of the encoded input vector and of the CSV header.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "soup", "main_dish", "side_dish", "side_helper", "beverage", "weekday", "holiday", "season"};

inline constexpr std::string_view kTargetName = "demand";

enum Feature : std::size_t {
  kSoup = 0,
  kMainDish,
  kSideDish,
  kSideHelper,
  kBeverage,
  kWeekday,
  kHoliday,
  kSeason,
};

/// Min-max bounds for one quantity.
struct NormBounds {
  double v_min = 0.0;
  double v_max = 1.0;

  bool operator==(const NormBounds&) const = default;
};

/// (v - v_min) / (v_max - v_min). Throws on degenerate bounds.
double normalize(double v, const NormBounds& b);
/// Inverse of normalize.
double denormalize(double v_n, const NormBounds& b);

/// Ordered label list for one categorical feature. The label at position i
/// has ordinal code i + 1.
class Codebook {
 public:
  Codebook(std::string feature, std::vector<std::string> labels);

  const std::string& feature() const noexcept { return feature_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }

  /// 1-based ordinal, or nullopt when the label is not in the book.
  std::optional<int> code(std::string_view label) const;
  bool contains(std::string_view label) const { return code(label).has_value(); }

  /// Bounds (1, K) used to normalize this feature's codes.
  NormBounds bounds() const;
  double normalized(int code) const;
  /// Normalized value of a label; throws a validation error naming the
  /// feature and label when the label is unknown.
  double normalized(std::string_view label) const;

  bool operator==(const Codebook&) const = default;

 private:
  std::string feature_;
  std::vector<std::string> labels_;
};

using Codebooks = std::vector<Codebook>;

/// The eight declared feature codebooks in column order.
Codebooks build_codebooks();

/// Text form: one `feature=label1|label2|...` line per book; '#' comments.
void write_codebooks(std::ostream& out, const Codebooks& books);
Codebooks read_codebooks(std::istream& in);
Codebooks load_codebooks(const std::string& path);

/// Throws unless `books` holds one book per feature in column order.
void check_codebook_schema(const Codebooks& books);

}  // namespace mealcast
