#include <stdio.h>
#include "wildram.h"
int main(void) {
  WrSeries *f = NULL;
  if (wr_series_from_json("{\"p\":3,\"prec\":62,\"coeffs\":[[5,1],[6,2]]}", &f) != WR_STATUS_OK) return 1;
  uint64_t v[3]; uint8_t e[3]; uint32_t pind;
  wr_series_ramification(f, 2, v, e);
  wr_series_pind(f, 1, &pind);
  printf("i = %llu %llu %llu, pind_1 = %u\n", (unsigned long long)v[0], (unsigned long long)v[1], (unsigned long long)v[2], pind);
  wr_series_free(f);
  WrStatus s = wr_series_from_json("{\"p\":4}", &f);
  char buf[256]; size_t need;
  wr_last_error(buf, sizeof buf, &need);
  printf("%s: %s\n", wr_status_str(s), buf);
  return 0;
}
