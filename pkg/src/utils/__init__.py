# Ham tien ich: log, loi, doc/ghi file
