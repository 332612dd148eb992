#pragma once

// 128-bit helpers shared by the exact-arithmetic translation units.
__extension__ typedef __int128 i128;
