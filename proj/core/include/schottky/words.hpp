#pragma once

#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

namespace schottky {

/// Reduced word in the free group on generators 1..g; letter -k is the inverse of k.
class GroupWord {
public:
    GroupWord() = default;
    /// Throws NotReduced if two adjacent letters cancel, InvalidInput on a zero letter.
    explicit GroupWord(std::vector<int> letters);
    GroupWord(std::initializer_list<int> letters) : GroupWord(std::vector<int>(letters)) {}

    const std::vector<int>& letters() const noexcept { return letters_; }
    std::size_t size() const noexcept { return letters_.size(); }
    bool empty() const noexcept { return letters_.empty(); }
    int front() const { return letters_.front(); }
    int back() const { return letters_.back(); }

    GroupWord inverse() const;
    std::string to_string() const;

    friend bool operator==(const GroupWord&, const GroupWord&) = default;

private:
    std::vector<int> letters_;
};

/// Letter order 1 < -1 < 2 < -2 < ...
int letter_rank(int letter) noexcept;
int letter_from_rank(int rank) noexcept;

/// Visits reduced words of length 0..max_len in length-then-lexicographic order.
/// The visitor may return false to stop the walk.
void for_each_reduced_word(int rank, int max_len, const std::function<bool(const GroupWord&)>& visit);

std::vector<GroupWord> enumerate_reduced_words(int rank, int max_len);

/// Words whose last letter is not +-i, identity included: one per coset of <gamma_i>.
std::vector<GroupWord> coset_representatives(int rank, int i, int max_len);

/// Identity plus words with first letter not +-i and last letter not +-j.
std::vector<GroupWord> double_coset_representatives(int rank, int i, int j, int max_len);

} // namespace schottky
