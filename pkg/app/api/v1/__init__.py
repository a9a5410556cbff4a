# v1 API init
