#pragma once

namespace diophant {

// GCC and Clang extension; __extension__ keeps -Wpedantic quiet.
__extension__ using u128 = unsigned __int128;
__extension__ using i128 = __int128;

}  // namespace diophant
