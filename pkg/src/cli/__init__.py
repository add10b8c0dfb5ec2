# Giao dien dong lenh: cau hinh, lenh con, bo kiem tra
