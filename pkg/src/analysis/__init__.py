# Phan tich: pho, hinh hoc Lagrangian, diem lien hop
