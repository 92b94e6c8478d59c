namespace dbf {}
