#define CHUNK 8

long consume(FILE *fp) {
  unsigned char block[CHUNK];
  long total = 0;
  size_t k = fread(block, 1, CHUNK, fp);
  for (size_t i = 0; i < k; i++)
    total += block[i];
  return total;
}
