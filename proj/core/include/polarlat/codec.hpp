#pragma once

#include <cstdint>
#include <vector>

#include "polarlat/polar.hpp"
#include "polarlat/rng.hpp"

namespace polarlat {

/// One transmitted block: N lattice points reduced into the top-level cell.
struct Frame {
    std::vector<double> symbols;
};

/// In-place polar transform x = u F^(x n) (no bit reversal); returns x.
std::vector<std::uint8_t> polar_transform(std::vector<std::uint8_t> u);

/// Per-level known-bit mask for decoding: -1 undecided, otherwise the forced
/// value (frozen or chained positions).
using KnownBits = std::vector<std::int8_t>;

/// Role-derived default mask: frozen set forced to frozen_value, rest open.
KnownBits default_known(const SecrecyCodeSpec& spec, int level, std::uint8_t frozen_value = 0);

struct EncodeResult {
    Frame frame;
    std::vector<std::vector<std::uint8_t>> level_u;         // u-domain, levels 1..r-1
    std::vector<std::vector<std::uint8_t>> level_codeword;  // x-domain
};

/// Single-block encode: message bits fill the per-level message sets in index
/// order (level-major), random positions draw from rng, frozen positions take
/// frozen_value. Block chaining is handled by chain_encode_sequence.
EncodeResult encode(const std::vector<std::uint8_t>& message_bits, CounterRng& rng,
                    const SecrecyCodeSpec& spec, std::uint8_t frozen_value = 0);

/// Successive-cancellation decoding of one partition level given the decided
/// lower-level codewords. Returns the u-domain decisions.
std::vector<std::uint8_t> sc_decode_level(const std::vector<double>& observations, int level,
                                          const SecrecyCodeSpec& spec,
                                          const std::vector<std::vector<std::uint8_t>>& lower_codewords,
                                          const KnownBits& known);

struct DecodeResult {
    std::vector<std::uint8_t> message_bits;
    std::vector<std::vector<std::uint8_t>> level_u;
    std::vector<std::vector<std::uint8_t>> level_codeword;
};

/// Multistage decoding: levels in order, each feeding its codeword to the
/// next. known_per_level overrides the default frozen-only masks (used by the
/// chained decoder to force recovered d-bits).
DecodeResult multistage_decode(const std::vector<double>& observation, const SecrecyCodeSpec& spec,
                               const std::vector<KnownBits>* known_per_level = nullptr);

/// Derived block-chaining layout. Within each payload block the lowest |d_i|
/// indices of the message set are reserved to carry the next block's d-bits;
/// the seed block carries block 1's d-bits in its reliable set and no message.
struct ChainLayout {
    std::vector<std::vector<int>> reserved;       // per level, subset of a
    std::vector<std::vector<int>> message_slots;  // per level, a minus reserved
    std::vector<std::vector<int>> seed_info;      // per level, sorted a-union-b
    int message_bits_per_block = 0;
};

ChainLayout chain_layout(const SecrecyCodeSpec& spec);

/// Checks that every chained d-bit rides in a secure (message-set) slot and
/// that the seed block uses only Bob-reliable positions. Throws
/// construction_error on violation.
void audit_chain_placement(const SecrecyCodeSpec& spec);

/// Encode blocks_per_level messages into blocks_per_level + 1 frames (seed
/// first). d-bits for every payload block are drawn up front so each block's
/// d-values ride in the previous block's reserved message slots.
std::vector<Frame> chain_encode_sequence(const std::vector<std::vector<std::uint8_t>>& messages,
                                         CounterRng& rng, const SecrecyCodeSpec& spec);

/// Decode a chained sequence; observations must hold blocks_per_level + 1
/// blocks. Returns the recovered per-block messages.
std::vector<std::vector<std::uint8_t>> chain_decode_sequence(
    const std::vector<std::vector<double>>& observations, const SecrecyCodeSpec& spec);

/// Frame invariant: every symbol lies on the alpha-grid inside the top cell.
bool frame_on_grid(const Frame& frame, const PartitionChain& chain, double tol = 1e-9);

/// CSV forms for frames/observations (one row per frame, 17 significant
/// digits) and hex strings for message bits (bit 0 is the high nibble bit of
/// the first digit).
void frames_write_csv(const std::vector<Frame>& frames, std::ostream& os);
std::vector<Frame> frames_read_csv(std::istream& is);
std::string bits_to_hex(const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> bits_from_hex(const std::string& hex, std::size_t n_bits);

}  // namespace polarlat
