bool main(u8 v) {
  u1 p = (u1)((v >> 7) ^ (v >> 6) ^ (v >> 5) ^ (v >> 4) ^
              (v >> 3) ^ (v >> 2) ^ (v >> 1) ^ v);
  return (bool)p;
}
